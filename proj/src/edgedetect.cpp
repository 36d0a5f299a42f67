#include "detangle/edgedetect.hpp"

#include <algorithm>
#include <cmath>

namespace detangle {

namespace {

// Outer ring of a 3x3 mask, clockwise from the top-left corner.
constexpr int kRingX[8] = {-1, 0, 1, 1, 1, 0, -1, -1};
constexpr int kRingY[8] = {-1, -1, -1, 0, 1, 1, 1, 0};

// North mask ring values: [[-1,-2,-1],[0,0,0],[1,2,1]].
constexpr double kNorthRing[8] = {-1, -2, -1, 0, 1, 2, 1, 0};

// Clockwise 45-degree steps from N for each direction.
constexpr int rotation_steps(CompassDirection d) {
    switch (d) {
    case CompassDirection::N: return 0;
    case CompassDirection::NE: return 1;
    case CompassDirection::E: return 2;
    case CompassDirection::SE: return 3;
    case CompassDirection::S: return 4;
    case CompassDirection::SW: return 5;
    case CompassDirection::W: return 6;
    case CompassDirection::NW: return 7;
    }
    return 0;
}

Kernel rotated_north(int steps) {
    std::vector<double> c(9, 0.0);
    for (int i = 0; i < 8; ++i) {
        const int j = (i + steps) % 8;
        c[(kRingY[j] + 1) * 3 + (kRingX[j] + 1)] = kNorthRing[i];
    }
    return Kernel(3, std::move(c));
}

} // namespace

std::string_view to_string(CompassDirection d) {
    switch (d) {
    case CompassDirection::N: return "N";
    case CompassDirection::S: return "S";
    case CompassDirection::E: return "E";
    case CompassDirection::W: return "W";
    case CompassDirection::NE: return "NE";
    case CompassDirection::NW: return "NW";
    case CompassDirection::SE: return "SE";
    case CompassDirection::SW: return "SW";
    }
    return "?";
}

std::optional<CompassDirection> parse_direction(std::string_view s) {
    for (auto d : kAllDirections)
        if (to_string(d) == s) return d;
    return std::nullopt;
}

const std::array<Kernel, 8>& robinson_masks() {
    static const std::array<Kernel, 8> masks = [] {
        std::array<Kernel, 8> m{rotated_north(0), rotated_north(0), rotated_north(0), rotated_north(0),
                                rotated_north(0), rotated_north(0), rotated_north(0), rotated_north(0)};
        for (auto d : kAllDirections) m[index_of(d)] = rotated_north(rotation_steps(d));
        return m;
    }();
    return masks;
}

const Kernel& robinson_mask(CompassDirection d) { return robinson_masks()[index_of(d)]; }

Response directional_response(const GrayImage& image, CompassDirection d) {
    return convolve(image, robinson_mask(d));
}

GrayImage edge_response(const GrayImage& image, CompassDirection d) {
    const Response raw = directional_response(image, d);
    double peak = 0.0;
    for (double v : raw.values()) peak = std::max(peak, std::abs(v));
    std::vector<std::uint8_t> out(raw.values().size(), 0);
    if (peak > 0.0) {
        const double scale = 255.0 / peak;
        auto v = raw.values();
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = static_cast<std::uint8_t>(std::clamp(std::lround(std::abs(v[i]) * scale), 0L, 255L));
    }
    return GrayImage(image.width(), image.height(), std::move(out));
}

Histogram Histogram::of(const GrayImage& image) {
    Histogram h;
    for (std::uint8_t v : image.pixels()) ++h.counts[v];
    h.total = image.size();
    return h;
}

ClassSplit split_at(const Histogram& hist, int threshold) {
    ClassSplit s;
    if (hist.total == 0) return s;
    const double total = static_cast<double>(hist.total);
    double mean = 0.0;
    for (int i = 0; i < 256; ++i) mean += i * (hist.counts[i] / total);
    double var = 0.0;
    for (int i = 0; i < 256; ++i) var += (hist.counts[i] / total) * (i - mean) * (i - mean);
    s.total_variance = var;

    double n_lower = 0.0;
    double sum_lower = 0.0;
    for (int i = 0; i < threshold; ++i) {
        n_lower += hist.counts[i] / total;
        sum_lower += i * (hist.counts[i] / total);
    }
    double n_upper = 0.0;
    double sum_upper = 0.0;
    for (int i = threshold; i < 256; ++i) {
        n_upper += hist.counts[i] / total;
        sum_upper += i * (hist.counts[i] / total);
    }
    s.weight_lower = n_lower;
    s.weight_upper = n_upper;
    s.mean_lower = n_lower > 0.0 ? sum_lower / n_lower : 0.0;
    s.mean_upper = n_upper > 0.0 ? sum_upper / n_upper : 0.0;
    for (int i = 0; i < threshold; ++i)
        s.variance_lower += (hist.counts[i] / total) * (i - s.mean_lower) * (i - s.mean_lower);
    for (int i = threshold; i < 256; ++i)
        s.variance_upper += (hist.counts[i] / total) * (i - s.mean_upper) * (i - s.mean_upper);
    if (n_lower > 0.0) s.variance_lower /= n_lower;
    if (n_upper > 0.0) s.variance_upper /= n_upper;

    s.within = n_lower * s.variance_lower + n_upper * s.variance_upper;
    s.between = n_lower * n_upper * (s.mean_lower - s.mean_upper) * (s.mean_lower - s.mean_upper);
    return s;
}

Thresholded otsu_threshold(const GrayImage& image) {
    const Histogram hist = Histogram::of(image);
    const auto occupied = std::count_if(hist.counts.begin(), hist.counts.end(),
                                        [](std::uint64_t c) { return c > 0; });
    if (occupied < 2) throw DegenerateHistogram("all pixels share one intensity");

    // Exact integer moments; the class terms are sum (i - mean)^2 per class.
    std::uint64_t n = hist.total, s = 0, q = 0;
    for (std::uint64_t i = 0; i < 256; ++i) {
        s += i * hist.counts[i];
        q += i * i * hist.counts[i];
    }
    const long double var = (static_cast<long double>(q) - static_cast<long double>(s) * s / n) / n;

    int best_t = 1;
    long double best = -1.0L;
    std::uint64_t n0 = 0, s0 = 0, q0 = 0;
    for (std::uint64_t t = 1; t < 256; ++t) {
        n0 += hist.counts[t - 1];
        s0 += (t - 1) * hist.counts[t - 1];
        q0 += (t - 1) * (t - 1) * hist.counts[t - 1];
        const std::uint64_t n1 = n - n0, s1 = s - s0, q1 = q - q0;
        long double within = 0.0L;
        if (n0 > 0) within += static_cast<long double>(q0) - static_cast<long double>(s0) * s0 / n0;
        if (n1 > 0) within += static_cast<long double>(q1) - static_cast<long double>(s1) * s1 / n1;
        within /= n;
        const long double between = var - within;
        if (between > best + 1e-9L * std::max(1.0L, best)) {
            best = between;
            best_t = static_cast<int>(t);
        }
    }

    Thresholded out{{best_t, std::max(0.0, static_cast<double>(best))}, BinaryImage(image.width(), image.height())};
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x) out.edges.set(x, y, image.at(x, y) >= best_t);
    return out;
}

} // namespace detangle
