#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "detangle/raster.hpp"

namespace detangle {

/// Compass directions in declaration order. The order doubles as the tie-break
/// order when merging detections.
enum class CompassDirection : std::uint8_t { N, S, E, W, NE, NW, SE, SW };

inline constexpr std::array<CompassDirection, 8> kAllDirections = {
    CompassDirection::N,  CompassDirection::S,  CompassDirection::E,  CompassDirection::W,
    CompassDirection::NE, CompassDirection::NW, CompassDirection::SE, CompassDirection::SW};

std::string_view to_string(CompassDirection d);
std::optional<CompassDirection> parse_direction(std::string_view s);
inline int index_of(CompassDirection d) { return static_cast<int>(d); }

/// The eight Robinson compass masks, indexed by CompassDirection.
const std::array<Kernel, 8>& robinson_masks();
const Kernel& robinson_mask(CompassDirection d);

/// Raw signed correlation with a compass mask.
Response directional_response(const GrayImage& image, CompassDirection d);

/// |correlation| rescaled so the strongest response maps to 255.
GrayImage edge_response(const GrayImage& image, CompassDirection d);

struct Histogram {
    std::array<std::uint64_t, 256> counts{};
    std::uint64_t total = 0;

    static Histogram of(const GrayImage& image);
};

struct OtsuResult {
    int threshold = 0;
    double between_class_variance = 0.0;
};

/// Class statistics for one candidate split of a histogram. Pixels below
/// `threshold` form the lower class, the rest the upper class.
struct ClassSplit {
    double weight_lower = 0.0;
    double weight_upper = 0.0;
    double mean_lower = 0.0;
    double mean_upper = 0.0;
    double variance_lower = 0.0;
    double variance_upper = 0.0;
    double within = 0.0;
    double between = 0.0;
    double total_variance = 0.0;
};

ClassSplit split_at(const Histogram& hist, int threshold);

struct Thresholded {
    OtsuResult otsu;
    BinaryImage edges;
};

/// Otsu's method over candidates 1..255; the smallest maximizing threshold wins.
/// Foreground is intensity >= threshold. Throws DegenerateHistogram on a
/// single-intensity image.
Thresholded otsu_threshold(const GrayImage& image);

} // namespace detangle
