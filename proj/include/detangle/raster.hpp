#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "detangle/error.hpp"

namespace detangle {

struct Pixel {
    int x = 0;
    int y = 0;

    friend bool operator==(Pixel, Pixel) = default;
    friend auto operator<=>(Pixel, Pixel) = default;
};

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(Rgb, Rgb) = default;
};

/// Row-major 8-bit RGB raster.
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height, Rgb fill = {});
    RgbImage(int width, int height, std::vector<std::uint8_t> data);

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return width_ == 0; }

    Rgb at(int x, int y) const;
    void set(int x, int y, Rgb value);
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    std::span<const std::uint8_t> bytes() const { return data_; }
    std::span<std::uint8_t> bytes() { return data_; }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Row-major single channel raster, intensities 0-255.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, std::uint8_t fill = 0);
    GrayImage(int width, int height, std::vector<std::uint8_t> data);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }

    std::uint8_t at(int x, int y) const { return data_[index(x, y)]; }
    void set(int x, int y, std::uint8_t v) { data_[index(x, y)] = v; }

    std::span<const std::uint8_t> pixels() const { return data_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Signed real-valued raster holding raw convolution output.
class Response {
public:
    Response() = default;
    Response(int width, int height, double fill = 0.0);

    int width() const { return width_; }
    int height() const { return height_; }

    double at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    double& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    std::span<const double> values() const { return data_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// Row-major boolean raster; true marks an edge (foreground) pixel.
class BinaryImage {
public:
    BinaryImage() = default;
    BinaryImage(int width, int height, bool fill = false);

    int width() const { return width_; }
    int height() const { return height_; }

    bool at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x] != 0; }
    void set(int x, int y, bool v) { data_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0; }
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
    /// Out-of-bounds reads are background.
    bool foreground(int x, int y) const { return contains(x, y) && at(x, y); }

    std::size_t count() const;

    friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Square, odd-sized convolution mask stored row-major.
class Kernel {
public:
    Kernel(int size, std::vector<double> coefficients);

    int size() const { return size_; }
    int radius() const { return size_ / 2; }
    /// Coefficient at signed offset (dx, dy) from the center.
    double at(int dx, int dy) const { return coeffs_[(dy + radius()) * size_ + (dx + radius())]; }
    std::span<const double> coefficients() const { return coeffs_; }
    double sum() const;

    static Kernel identity(int size = 3);

    friend bool operator==(const Kernel&, const Kernel&) = default;

private:
    int size_;
    std::vector<double> coeffs_;
};

/// ITU-R 601 luma, rounded and clamped.
GrayImage to_grayscale(const RgbImage& image);

/// Correlates `kernel` with a single channel, replicating edge pixels past the border.
/// Output stays signed and unclamped.
Response convolve(const Response& image, const Kernel& kernel);
Response convolve(const GrayImage& image, const Kernel& kernel);

Response to_response(const GrayImage& image);
/// Rounds and clamps to 0-255.
GrayImage to_gray(const Response& response);

} // namespace detangle
