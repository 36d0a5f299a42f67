#include "detangle/verdict.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace detangle {

std::optional<TangleCandidate> decide_window(std::span<const PatchAnalysis> analyses,
                                             const IntersectionPoint& ip, const WindowRect& rect,
                                             CompassDirection direction, const DecideConfig& config) {
    if (analyses.size() < 2) return std::nullopt;
    const Point2 local{ip.position.x - rect.x0, ip.position.y - rect.y0};

    std::vector<std::pair<double, int>> dist;  // (d_j, index into analyses)
    dist.reserve(analyses.size());
    for (std::size_t j = 0; j < analyses.size(); ++j)
        dist.emplace_back(distance(analyses[j].midpoints.mean, local), static_cast<int>(j));
    std::sort(dist.begin(), dist.end(), [&](const auto& a, const auto& b) {
        return a.first != b.first ? a.first < b.first
                                  : analyses[a.second].patch_id < analyses[b.second].patch_id;
    });
    if (dist[1].first - dist[0].first <= config.tie_epsilon_px) return std::nullopt;

    const double d_w = rect.diagonal();
    const PatchAnalysis& over = analyses[dist[0].second];
    TangleCandidate c;
    c.position = ip.position;
    c.over_patch = over.patch_id;
    for (std::size_t k = 1; k < dist.size(); ++k) c.under_patches.push_back(analyses[dist[k].second].patch_id);
    c.d_over = dist[0].first;
    c.confidence = std::clamp((d_w - c.d_over) / d_w, 0.0, 1.0);
    c.direction = direction;
    c.window = rect;
    c.over_angle_deg = over.poly.orientation_deg(over.poly.axis == FitAxis::XMajor ? local.x : local.y);
    c.crossing_angle_deg = ip.crossing_angle_deg;
    return c;
}

namespace {

// Total order used to pick cluster representatives and to sort the output.
auto rank_key(const TangleCandidate& c) {
    return std::make_tuple(-c.confidence, index_of(c.direction), c.window.y0, c.window.x0, c.window.h,
                           c.window.w, c.over_patch, c.position.x, c.position.y);
}

struct DisjointSet {
    std::vector<std::size_t> parent;
    explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

} // namespace

std::vector<Tangle> merge_candidates(std::span<const TangleCandidate> candidates, double merge_radius) {
    const std::size_t n = candidates.size();
    DisjointSet sets(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (distance(candidates[i].position, candidates[j].position) <= merge_radius) sets.unite(i, j);

    std::vector<std::size_t> best(n, n);
    std::vector<int> members(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = sets.find(i);
        ++members[root];
        if (best[root] == n || rank_key(candidates[i]) < rank_key(candidates[best[root]])) best[root] = i;
    }

    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < n; ++i)
        if (sets.find(i) == i) reps.push_back(i);
    std::sort(reps.begin(), reps.end(), [&](std::size_t a, std::size_t b) {
        return rank_key(candidates[best[a]]) < rank_key(candidates[best[b]]);
    });

    std::vector<Tangle> out;
    out.reserve(reps.size());
    for (std::size_t root : reps) {
        const TangleCandidate& c = candidates[best[root]];
        Tangle t;
        t.position = c.position;
        t.over_patch = {c.direction, c.window, c.over_patch};
        t.confidence = c.confidence;
        t.contributing_candidate_count = members[root];
        t.over_angle_deg = c.over_angle_deg;
        out.push_back(t);
    }
    return out;
}

} // namespace detangle
