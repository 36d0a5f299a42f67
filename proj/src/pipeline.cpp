#include "detangle/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <numbers>

#include "detangle/preprocess.hpp"

namespace detangle {

namespace {

bool within_reach(const Midpoints& mids, Point2 local, double reach) {
    return std::any_of(mids.points.begin(), mids.points.end(),
                       [&](Point2 m) { return distance(m, local) <= reach; });
}

// Orientation of the principal axis of the midpoints, degrees in [0, 180).
double principal_orientation(const Midpoints& mids) {
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (auto p : mids.points) {
        const double dx = p.x - mids.mean.x;
        const double dy = p.y - mids.mean.y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    double deg = 0.5 * std::atan2(2.0 * sxy, sxx - syy) * 180.0 / std::numbers::pi;
    if (deg < 0.0) deg += 180.0;
    return deg;
}

double axis_angle(const Midpoints& a, const Midpoints& b) {
    const double d = std::abs(principal_orientation(a) - principal_orientation(b));
    return std::min(d, 180.0 - d);
}

bool clear_of_border(Point2 local, const WindowRect& rect, double margin) {
    return local.x >= margin && local.y >= margin && local.x <= rect.w - 1 - margin &&
           local.y <= rect.h - 1 - margin;
}

} // namespace

GrayImage prepare(const RgbImage& image, const PipelineConfig& config) {
    return to_grayscale(gaussian_blur(isolate_color(image, config.color), config.blur));
}

std::vector<TangleCandidate> analyze_window(const BinaryImage& edges, const WindowRect& rect,
                                            CompassDirection direction,
                                            const PipelineConfig& config) {
    const auto patches = extract_patches(edges, rect, config.window.min_patch_pixels);
    if (patches.size() < 2) return {};

    std::vector<PatchAnalysis> analyses;
    analyses.reserve(patches.size());
    for (const auto& patch : patches) {
        PatchAnalysis a;
        a.patch_id = patch.id;
        a.contour = trace_contour(patch_mask(patch, rect), patch.pixels.front(), config.connectivity);
        a.midpoints = pair_midpoints(a.contour);
        try {
            a.poly = fit_polynomial(a.midpoints, config.fit);
        } catch (const UnfittablePatch&) {
            continue;
        }
        analyses.push_back(std::move(a));
    }

    std::vector<TangleCandidate> out;
    for (std::size_t i = 0; i < analyses.size(); ++i)
        for (std::size_t j = i + 1; j < analyses.size(); ++j) {
            const auto ip = intersect(analyses[i], analyses[j], rect);
            if (!ip || axis_angle(analyses[i].midpoints, analyses[j].midpoints) < config.min_crossing_angle_deg)
                continue;
            const Point2 local{ip->position.x - rect.x0, ip->position.y - rect.y0};
            if (!clear_of_border(local, rect, config.border_margin_px)) continue;
            if (!within_reach(analyses[i].midpoints, local, config.max_reach_px) ||
                !within_reach(analyses[j].midpoints, local, config.max_reach_px))
                continue;
            if (auto c = decide_window(analyses, *ip, rect, direction, config.decide)) out.push_back(std::move(*c));
        }
    return out;
}

std::vector<TangleCandidate> analyze_direction(const GrayImage& gray, CompassDirection direction,
                                               const PipelineConfig& config, bool* degenerate) {
    if (degenerate) *degenerate = false;
    Thresholded t;
    try {
        t = otsu_threshold(edge_response(gray, direction));
    } catch (const DegenerateHistogram&) {
        if (degenerate) *degenerate = true;
        return {};
    }
    std::vector<TangleCandidate> out;
    for (const auto& rect : windows(gray.width(), gray.height(), config.window)) {
        auto found = analyze_window(t.edges, rect, direction, config);
        out.insert(out.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
    }
    return out;
}

PipelineResult run_pipeline(const RgbImage& image, const PipelineConfig& config) {
    config.validate();
    const GrayImage gray = prepare(image, config);

    std::array<std::vector<TangleCandidate>, 8> per_direction;
    std::array<bool, 8> degenerate{};
    if (config.mode == ExecutionMode::Concurrent) {
        std::array<std::future<std::vector<TangleCandidate>>, 8> jobs;
        for (auto d : kAllDirections)
            jobs[index_of(d)] = std::async(std::launch::async, [&, d] {
                return analyze_direction(gray, d, config, &degenerate[index_of(d)]);
            });
        for (auto d : kAllDirections) per_direction[index_of(d)] = jobs[index_of(d)].get();
    } else {
        for (auto d : kAllDirections)
            per_direction[index_of(d)] = analyze_direction(gray, d, config, &degenerate[index_of(d)]);
    }

    PipelineResult result;
    for (auto d : kAllDirections) {
        if (degenerate[index_of(d)]) result.skipped_directions.push_back(d);
        auto& c = per_direction[index_of(d)];
        result.candidates.insert(result.candidates.end(), c.begin(), c.end());
    }
    result.tangles = merge_candidates(result.candidates, config.merge_radius_px);
    return result;
}

} // namespace detangle
