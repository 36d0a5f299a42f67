#pragma once

#include <cmath>
#include <vector>

#include "detangle/raster.hpp"

namespace detangle {

struct WindowRect {
    int x0 = 0;
    int y0 = 0;
    int w = 0;
    int h = 0;

    double diagonal() const { return std::hypot(static_cast<double>(w), static_cast<double>(h)); }
    bool contains(double x, double y) const {
        return x >= x0 && y >= y0 && x <= x0 + w - 1 && y <= y0 + h - 1;
    }

    friend bool operator==(const WindowRect&, const WindowRect&) = default;
    friend auto operator<=>(const WindowRect& a, const WindowRect& b) {
        if (auto c = a.y0 <=> b.y0; c != 0) return c;
        if (auto c = a.x0 <=> b.x0; c != 0) return c;
        if (auto c = a.h <=> b.h; c != 0) return c;
        return a.w <=> b.w;
    }
};

struct WindowConfig {
    int w = 64;
    int h = 64;
    int stride = 32;
    int min_patch_pixels = 24;
};

/// One 8-connected component of edge pixels inside a window.
struct Patch {
    int id = 0;
    /// Window-local coordinates in raster order.
    std::vector<Pixel> pixels;
    Pixel min{};
    Pixel max{};
};

/// Raster-ordered window placements on a stride grid, plus placements flush
/// with the right and bottom edges so that every pixel is covered. Windows
/// larger than the image shrink to the image; a stride wider than the window
/// is cut to the window size.
std::vector<WindowRect> windows(int image_w, int image_h, int w, int h, int stride);
std::vector<WindowRect> windows(int image_w, int image_h, const WindowConfig& config);

/// 8-connected components of the foreground inside `rect`, dropping those
/// smaller than `min_patch_pixels`. Patches are ordered by their first pixel
/// in raster order.
std::vector<Patch> extract_patches(const BinaryImage& edges, const WindowRect& rect,
                                   int min_patch_pixels = 24);

/// Window-sized mask containing only `patch`.
BinaryImage patch_mask(const Patch& patch, const WindowRect& rect);

} // namespace detangle
