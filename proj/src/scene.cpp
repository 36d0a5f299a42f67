#include "detangle/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

namespace detangle {

namespace {

using json = nlohmann::ordered_json;

// Portable draws; the standard distributions are implementation-defined.
struct Rng {
    std::mt19937_64 engine;
    explicit Rng(std::uint64_t seed) : engine(seed) {}
    double uniform() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
};

double segment_distance(Point2 p, Point2 a, Point2 b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0.0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

double orientation_deg(Point2 a, Point2 b) {
    double deg = std::atan2(b.y - a.y, b.x - a.x) * 180.0 / std::numbers::pi;
    if (deg < 0.0) deg += 180.0;
    if (deg >= 180.0) deg -= 180.0;
    return deg;
}

std::optional<Point2> segment_intersection(Point2 a, Point2 b, Point2 c, Point2 d) {
    const double rx = b.x - a.x, ry = b.y - a.y;
    const double sx = d.x - c.x, sy = d.y - c.y;
    const double denom = rx * sy - ry * sx;
    if (std::abs(denom) < 1e-12) return std::nullopt;
    const double t = ((c.x - a.x) * sy - (c.y - a.y) * sx) / denom;
    const double u = ((c.x - a.x) * ry - (c.y - a.y) * rx) / denom;
    if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
    return Point2{a.x + t * rx, a.y + t * ry};
}

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

RgbImage render_background(const SceneSpec& spec, Rng& rng) {
    RgbImage bg(spec.width, spec.height, spec.background);
    if (spec.background_style == BackgroundStyle::Flat) return bg;
    // Bilinear value noise on a 16 px lattice.
    constexpr int cell = 16;
    const int gw = spec.width / cell + 2;
    const int gh = spec.height / cell + 2;
    std::vector<double> lattice(static_cast<std::size_t>(gw) * gh);
    for (double& v : lattice) v = rng.uniform(-1.0, 1.0) * spec.texture_amplitude;
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            const int gx = x / cell, gy = y / cell;
            const double fx = (x % cell) / double(cell), fy = (y % cell) / double(cell);
            auto at = [&](int i, int j) { return lattice[static_cast<std::size_t>(j) * gw + i]; };
            const double v = (1 - fx) * (1 - fy) * at(gx, gy) + fx * (1 - fy) * at(gx + 1, gy) +
                             (1 - fx) * fy * at(gx, gy + 1) + fx * fy * at(gx + 1, gy + 1);
            const Rgb b = spec.background;
            bg.set(x, y, Rgb{to_byte(b.r + v), to_byte(b.g + v), to_byte(b.b + v)});
        }
    }
    return bg;
}

// Paints every pixel whose center lies within `radius` of the polyline.
template <typename Paint>
void stamp_polyline(const std::vector<Point2>& pts, double radius, int width, int height, Paint&& paint) {
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
        const Point2 a = pts[s], b = pts[s + 1];
        const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - radius)));
        const int x1 = std::min(width - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + radius)));
        const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - radius)));
        const int y1 = std::min(height - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + radius)));
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x)
                if (segment_distance({double(x), double(y)}, a, b) <= radius) paint(x, y);
    }
}

void validate(const SceneSpec& spec) {
    if (spec.width < 1 || spec.height < 1) throw InvalidArgument("scene dimensions must be positive");
    if (spec.noise_sigma < 0.0 || spec.occlusion_gap < 0.0 || spec.texture_amplitude < 0.0)
        throw InvalidArgument("noise, gap and texture amplitude must be non-negative");
    for (std::size_t i = 0; i < spec.wires.size(); ++i) {
        const auto& w = spec.wires[i];
        if (!(w.thickness > 0.0)) throw InvalidArgument("wire " + std::to_string(i) + " has zero thickness");
        if (w.points.size() < 2) throw InvalidArgument("wire " + std::to_string(i) + " needs two points");
        for (auto p : w.points)
            if (p.x < 0.0 || p.y < 0.0 || p.x > spec.width - 1 || p.y > spec.height - 1)
                throw InvalidArgument("wire " + std::to_string(i) + " leaves the image");
    }
}

} // namespace

std::pair<RgbImage, GroundTruth> generate_scene(const SceneSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);
    const RgbImage background = render_background(spec, rng);
    RgbImage img = background;

    for (const auto& wire : spec.wires) {
        const double core = wire.thickness / 2.0;
        if (spec.occlusion_gap > 0.0)
            stamp_polyline(wire.points, core + spec.occlusion_gap, spec.width, spec.height,
                           [&](int x, int y) { img.set(x, y, background.at(x, y)); });
        stamp_polyline(wire.points, core, spec.width, spec.height,
                       [&](int x, int y) { img.set(x, y, wire.color); });
    }

    if (spec.noise_sigma > 0.0) {
        for (auto& byte : img.bytes()) byte = to_byte(byte + spec.noise_sigma * rng.normal());
    }

    GroundTruth truth{spec.width, spec.height, {}};
    for (std::size_t i = 0; i < spec.wires.size(); ++i)
        for (std::size_t j = i + 1; j < spec.wires.size(); ++j) {
            const auto& under = spec.wires[i].points;
            const auto& over = spec.wires[j].points;
            for (std::size_t a = 0; a + 1 < under.size(); ++a)
                for (std::size_t b = 0; b + 1 < over.size(); ++b)
                    if (auto p = segment_intersection(under[a], under[a + 1], over[b], over[b + 1]))
                        truth.crossings.push_back({*p, static_cast<int>(j), static_cast<int>(i),
                                                   orientation_deg(over[b], over[b + 1]),
                                                   orientation_deg(under[a], under[a + 1])});
        }
    return {std::move(img), std::move(truth)};
}

namespace {

// Endpoints of the line through `c` with direction `deg`, clipped to the image inset by `margin`.
std::vector<Point2> line_through(Point2 c, double deg, int width, int height, double margin) {
    const double dx = std::cos(deg * std::numbers::pi / 180.0);
    const double dy = std::sin(deg * std::numbers::pi / 180.0);
    double tmin = -1e9, tmax = 1e9;
    auto clip = [&](double p, double d, double lo, double hi) {
        if (std::abs(d) < 1e-12) return;
        double t0 = (lo - p) / d, t1 = (hi - p) / d;
        if (t0 > t1) std::swap(t0, t1);
        tmin = std::max(tmin, t0);
        tmax = std::min(tmax, t1);
    };
    clip(c.x, dx, margin, width - 1 - margin);
    clip(c.y, dy, margin, height - 1 - margin);
    return {{c.x + tmin * dx, c.y + tmin * dy}, {c.x + tmax * dx, c.y + tmax * dy}};
}

Rgb random_wire_color(Rng& rng) {
    // Saturated colors well above the dark default background.
    static constexpr Rgb palette[] = {{220, 60, 50},  {60, 200, 80},  {70, 110, 235}, {235, 200, 60},
                                      {200, 80, 210}, {60, 205, 210}, {240, 140, 40}, {230, 230, 230}};
    return palette[static_cast<std::size_t>(rng.uniform() * 8.0) % 8];
}

} // namespace

SceneSpec random_x_crossing(std::uint64_t seed, int width, int height, double noise_sigma) {
    Rng rng(seed * 0x9E3779B97F4A7C15ULL + 1);
    SceneSpec spec;
    spec.width = width;
    spec.height = height;
    spec.noise_sigma = noise_sigma;
    spec.seed = seed;
    const Point2 c{width / 2.0 + rng.uniform(-0.15, 0.15) * width,
                   height / 2.0 + rng.uniform(-0.15, 0.15) * height};
    const double a1 = rng.uniform(0.0, 180.0);
    const double sep = rng.uniform(40.0, 90.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    const Rgb c1 = random_wire_color(rng);
    Rgb c2 = random_wire_color(rng);
    WireSpec w1{line_through(c, a1, width, height, 2.0), rng.uniform(3.0, 5.0), c1};
    WireSpec w2{line_through(c, a1 + sep, width, height, 2.0), rng.uniform(3.0, 5.0), c2};
    spec.wires = {w1, w2};
    return spec;
}

namespace {

json rgb_json(Rgb c) { return json::array({c.r, c.g, c.b}); }

Rgb rgb_from(const json& j) {
    if (!j.is_array() || j.size() != 3) throw InvalidArgument("color must be [r,g,b]");
    auto ch = [](const json& v) {
        const int x = v.get<int>();
        if (x < 0 || x > 255) throw InvalidArgument("color channel out of range");
        return static_cast<std::uint8_t>(x);
    };
    return {ch(j[0]), ch(j[1]), ch(j[2])};
}

template <typename F>
auto guarded(F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed JSON: ") + e.what());
    }
}

} // namespace

SceneSpec scene_spec_from_json(std::string_view text) {
    return guarded([&] {
        const json j = json::parse(text);
        SceneSpec s;
        s.width = j.value("width", s.width);
        s.height = j.value("height", s.height);
        if (j.contains("background")) s.background = rgb_from(j["background"]);
        const std::string style = j.value("background_style", std::string("flat"));
        if (style == "flat") s.background_style = BackgroundStyle::Flat;
        else if (style == "texture") s.background_style = BackgroundStyle::Texture;
        else throw InvalidArgument("background_style must be flat or texture");
        s.texture_amplitude = j.value("texture_amplitude", s.texture_amplitude);
        s.noise_sigma = j.value("noise_sigma", s.noise_sigma);
        s.occlusion_gap = j.value("occlusion_gap", s.occlusion_gap);
        s.seed = j.value("seed", s.seed);
        for (const auto& w : j.value("wires", json::array())) {
            WireSpec wire;
            for (const auto& p : w.at("points")) wire.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
            wire.thickness = w.value("thickness", wire.thickness);
            if (w.contains("color")) wire.color = rgb_from(w["color"]);
            s.wires.push_back(std::move(wire));
        }
        return s;
    });
}

std::string to_json(const SceneSpec& s) {
    json j;
    j["width"] = s.width;
    j["height"] = s.height;
    j["background"] = rgb_json(s.background);
    j["background_style"] = s.background_style == BackgroundStyle::Flat ? "flat" : "texture";
    j["texture_amplitude"] = s.texture_amplitude;
    j["noise_sigma"] = s.noise_sigma;
    j["occlusion_gap"] = s.occlusion_gap;
    j["seed"] = s.seed;
    j["wires"] = json::array();
    for (const auto& w : s.wires) {
        json pts = json::array();
        for (auto p : w.points) pts.push_back(json::array({p.x, p.y}));
        j["wires"].push_back({{"points", pts}, {"thickness", w.thickness}, {"color", rgb_json(w.color)}});
    }
    return j.dump(2);
}

GroundTruth ground_truth_from_json(std::string_view text) {
    return guarded([&] {
        const json j = json::parse(text);
        GroundTruth t;
        t.width = j.at("width").get<int>();
        t.height = j.at("height").get<int>();
        for (const auto& c : j.at("crossings"))
            t.crossings.push_back({{c.at("x").get<double>(), c.at("y").get<double>()},
                                   c.at("over_wire").get<int>(), c.at("under_wire").get<int>(),
                                   c.value("over_angle_deg", 0.0), c.value("under_angle_deg", 0.0)});
        return t;
    });
}

std::string to_json(const GroundTruth& t) {
    json j;
    j["width"] = t.width;
    j["height"] = t.height;
    j["crossings"] = json::array();
    for (const auto& c : t.crossings)
        j["crossings"].push_back({{"x", c.position.x},
                                  {"y", c.position.y},
                                  {"over_wire", c.over_wire},
                                  {"under_wire", c.under_wire},
                                  {"over_angle_deg", c.over_angle_deg},
                                  {"under_angle_deg", c.under_angle_deg}});
    return j.dump(2);
}

} // namespace detangle
