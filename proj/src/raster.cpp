#include "detangle/raster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace detangle {

namespace {

void check_dims(int width, int height) {
    if (width < 1 || height < 1)
        throw InvalidArgument("image dimensions must be positive, got " + std::to_string(width) +
                              "x" + std::to_string(height));
}

std::uint8_t clamp_round(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

} // namespace

RgbImage::RgbImage(int width, int height, Rgb fill) : width_(width), height_(height) {
    check_dims(width, height);
    data_.resize(static_cast<std::size_t>(width) * height * 3);
    for (std::size_t i = 0; i < data_.size(); i += 3) {
        data_[i] = fill.r;
        data_[i + 1] = fill.g;
        data_[i + 2] = fill.b;
    }
}

RgbImage::RgbImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * height * 3)
        throw InvalidArgument("RGB buffer size does not match dimensions");
}

Rgb RgbImage::at(int x, int y) const {
    const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    return {data_[i], data_[i + 1], data_[i + 2]};
}

void RgbImage::set(int x, int y, Rgb value) {
    const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    data_[i] = value.r;
    data_[i + 1] = value.g;
    data_[i + 2] = value.b;
}

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
    check_dims(width, height);
    data_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * height)
        throw InvalidArgument("gray buffer size does not match dimensions");
}

Response::Response(int width, int height, double fill) : width_(width), height_(height) {
    check_dims(width, height);
    data_.assign(static_cast<std::size_t>(width) * height, fill);
}

BinaryImage::BinaryImage(int width, int height, bool fill) : width_(width), height_(height) {
    check_dims(width, height);
    data_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

std::size_t BinaryImage::count() const {
    return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

Kernel::Kernel(int size, std::vector<double> coefficients)
    : size_(size), coeffs_(std::move(coefficients)) {
    if (size < 1 || size % 2 == 0)
        throw InvalidArgument("kernel size must be odd and positive, got " + std::to_string(size));
    if (coeffs_.size() != static_cast<std::size_t>(size) * size)
        throw InvalidArgument("kernel needs size*size coefficients");
}

double Kernel::sum() const { return std::accumulate(coeffs_.begin(), coeffs_.end(), 0.0); }

Kernel Kernel::identity(int size) {
    std::vector<double> c(static_cast<std::size_t>(size) * size, 0.0);
    if (size >= 1) c[c.size() / 2] = 1.0;
    return Kernel(size, std::move(c));
}

GrayImage to_grayscale(const RgbImage& image) {
    std::vector<std::uint8_t> out(static_cast<std::size_t>(image.width()) * image.height());
    auto src = image.bytes();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double luma = 0.299 * src[3 * i] + 0.587 * src[3 * i + 1] + 0.114 * src[3 * i + 2];
        out[i] = clamp_round(luma);
    }
    return GrayImage(image.width(), image.height(), std::move(out));
}

Response convolve(const Response& image, const Kernel& kernel) {
    const int w = image.width();
    const int h = image.height();
    const int r = kernel.radius();
    Response out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int j = -r; j <= r; ++j) {
                const int yy = std::clamp(y + j, 0, h - 1);
                for (int i = -r; i <= r; ++i) {
                    const int xx = std::clamp(x + i, 0, w - 1);
                    acc += kernel.at(i, j) * image.at(xx, yy);
                }
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

Response to_response(const GrayImage& image) {
    Response out(image.width(), image.height());
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x) out.at(x, y) = image.at(x, y);
    return out;
}

Response convolve(const GrayImage& image, const Kernel& kernel) {
    return convolve(to_response(image), kernel);
}

GrayImage to_gray(const Response& response) {
    std::vector<std::uint8_t> out(response.values().size());
    auto v = response.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = clamp_round(v[i]);
    return GrayImage(response.width(), response.height(), std::move(out));
}

} // namespace detangle
