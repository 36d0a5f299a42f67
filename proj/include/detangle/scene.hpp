#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "detangle/curvefit.hpp"
#include "detangle/raster.hpp"

namespace detangle {

struct WireSpec {
    /// Polyline control points in image coordinates.
    std::vector<Point2> points;
    double thickness = 4.0;
    Rgb color{200, 60, 40};
};

enum class BackgroundStyle { Flat, Texture };

/// Wires are drawn in list order; later wires occlude earlier ones.
struct SceneSpec {
    int width = 640;
    int height = 480;
    std::vector<WireSpec> wires;
    Rgb background{30, 30, 30};
    BackgroundStyle background_style = BackgroundStyle::Flat;
    /// Amplitude of the seeded texture, intensity levels.
    double texture_amplitude = 12.0;
    /// Standard deviation of per-pixel Gaussian noise.
    double noise_sigma = 0.0;
    /// Width of the background-colored margin each wire clears around itself,
    /// which cuts a visible gap into the wires it crosses.
    double occlusion_gap = 5.0;
    std::uint64_t seed = 0;
};

struct Crossing {
    Point2 position;
    int over_wire = 0;
    int under_wire = 0;
    /// Centerline orientations at the crossing, degrees in [0, 180).
    double over_angle_deg = 0.0;
    double under_angle_deg = 0.0;
};

struct GroundTruth {
    int width = 0;
    int height = 0;
    std::vector<Crossing> crossings;
};

/// Renders the scene and records every crossing between centerlines of
/// different wires. Deterministic in `spec.seed`. Throws InvalidArgument for
/// non-positive thickness or control points outside the image.
std::pair<RgbImage, GroundTruth> generate_scene(const SceneSpec& spec);

/// Two straight wires spanning the frame and crossing near its middle, with
/// direction, crossing angle and colors drawn from `seed`.
SceneSpec random_x_crossing(std::uint64_t seed, int width = 640, int height = 480,
                            double noise_sigma = 4.0);

SceneSpec scene_spec_from_json(std::string_view text);
std::string to_json(const SceneSpec& spec);
GroundTruth ground_truth_from_json(std::string_view text);
std::string to_json(const GroundTruth& truth);

} // namespace detangle
