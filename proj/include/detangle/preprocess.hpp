#pragma once

#include <optional>

#include "detangle/raster.hpp"

namespace detangle {

/// Wire-of-interest color with a Euclidean RGB tolerance.
struct ColorTarget {
    Rgb color;
    double tolerance = 60.0;
};

struct BlurConfig {
    int size = 5;
    double sigma = 1.0;

    static BlurConfig indoor() { return {5, 1.0}; }
    static BlurConfig outdoor() { return {9, 2.0}; }
};

/// Keeps pixels within `target.tolerance` of the target color and blackens the
/// rest. With no target the image is returned unchanged.
RgbImage isolate_color(const RgbImage& image, const std::optional<ColorTarget>& target);

/// Sampled 2-D Gaussian, normalized to unit sum.
Kernel gaussian_kernel(const BlurConfig& config);

/// Per-channel blur with replicated borders.
RgbImage gaussian_blur(const RgbImage& image, const BlurConfig& config);
GrayImage gaussian_blur(const GrayImage& image, const BlurConfig& config);

} // namespace detangle
