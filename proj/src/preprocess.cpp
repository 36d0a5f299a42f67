#include "detangle/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace detangle {

RgbImage isolate_color(const RgbImage& image, const std::optional<ColorTarget>& target) {
    if (!target) return image;
    if (target->tolerance < 0.0) throw InvalidArgument("color tolerance must be non-negative");
    RgbImage out = image;
    const double tol2 = target->tolerance * target->tolerance;
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            const Rgb p = image.at(x, y);
            const double dr = double(p.r) - target->color.r;
            const double dg = double(p.g) - target->color.g;
            const double db = double(p.b) - target->color.b;
            if (dr * dr + dg * dg + db * db > tol2) out.set(x, y, Rgb{0, 0, 0});
        }
    }
    return out;
}

Kernel gaussian_kernel(const BlurConfig& config) {
    if (config.size < 1 || config.size % 2 == 0)
        throw InvalidArgument("blur size must be odd and positive, got " + std::to_string(config.size));
    if (!(config.sigma > 0.0)) throw InvalidArgument("blur sigma must be positive");
    const int r = config.size / 2;
    const double two_s2 = 2.0 * config.sigma * config.sigma;
    std::vector<double> c;
    c.reserve(static_cast<std::size_t>(config.size) * config.size);
    // The 1/(2 pi sigma^2) factor cancels in the normalization.
    double sum = 0.0;
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
            const double g = std::exp(-(dx * dx + dy * dy) / two_s2);
            c.push_back(g);
            sum += g;
        }
    for (double& v : c) v /= sum;
    return Kernel(config.size, std::move(c));
}

GrayImage gaussian_blur(const GrayImage& image, const BlurConfig& config) {
    return to_gray(convolve(image, gaussian_kernel(config)));
}

RgbImage gaussian_blur(const RgbImage& image, const BlurConfig& config) {
    const Kernel k = gaussian_kernel(config);
    const int w = image.width();
    const int h = image.height();
    RgbImage out(w, h);
    auto src = image.bytes();
    auto dst = out.bytes();
    for (int ch = 0; ch < 3; ++ch) {
        Response plane(w, h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                plane.at(x, y) = src[(static_cast<std::size_t>(y) * w + x) * 3 + ch];
        const GrayImage blurred = to_gray(convolve(plane, k));
        auto px = blurred.pixels();
        for (std::size_t i = 0; i < px.size(); ++i) dst[i * 3 + ch] = px[i];
    }
    return out;
}

} // namespace detangle
