#include "detangle/evaluate.hpp"

#include <algorithm>
#include <cmath>

namespace detangle {

double ConfusionRates::accuracy() const {
    const double s = sum();
    return s > 0.0 ? (tp + tn) / s : 0.0;
}

ConfusionRates ConfusionRates::from_counts(const ConfusionCounts& c) {
    const double n = c.total();
    if (n == 0.0) return {};
    return {c.tp / n, c.tn / n, c.fp / n, c.fn / n};
}

namespace {

double angular_gap(double a, double b) {
    double d = std::fmod(std::abs(a - b), 180.0);
    return std::min(d, 180.0 - d);
}

} // namespace

bool names_correct_over_wire(const Tangle& detection, const Crossing& crossing) {
    return angular_gap(detection.over_angle_deg, crossing.over_angle_deg) <
           angular_gap(detection.over_angle_deg, crossing.under_angle_deg);
}

ConfusionCounts count_outcomes(std::span<const Tangle> detections, const GroundTruth& truth,
                               std::span<const WindowRect> windows, double match_radius) {
    auto near = [&](const Tangle& d, const Crossing& c) {
        return distance(d.position, c.position) <= match_radius;
    };
    auto inside = [](const WindowRect& w, Point2 p) { return w.contains(p.x, p.y); };

    std::vector<bool> matches_any(detections.size(), false);
    for (std::size_t i = 0; i < detections.size(); ++i)
        matches_any[i] = std::any_of(truth.crossings.begin(), truth.crossings.end(),
                                     [&](const Crossing& c) { return near(detections[i], c); });

    ConfusionCounts counts;
    for (const auto& w : windows) {
        std::vector<const Crossing*> here;
        for (const auto& c : truth.crossings)
            if (inside(w, c.position)) here.push_back(&c);

        if (here.empty()) {
            bool spurious = false;
            for (std::size_t i = 0; i < detections.size(); ++i)
                if (inside(w, detections[i].position) && !matches_any[i]) spurious = true;
            ++(spurious ? counts.fp : counts.tn);
            continue;
        }

        bool hit = false;
        bool claimed = false;
        for (const auto& d : detections) {
            bool near_here = false;
            for (const Crossing* c : here) {
                if (!near(d, *c)) continue;
                near_here = true;
                if (names_correct_over_wire(d, *c)) hit = true;
            }
            if (near_here || inside(w, d.position)) claimed = true;
        }
        if (hit) {
            ++counts.tp;
        } else {
            ++counts.fn;
            if (claimed) ++counts.fp;
        }
    }
    return counts;
}

ConfusionRates evaluate(std::span<const Tangle> detections, const GroundTruth& truth,
                        std::span<const WindowRect> windows, double match_radius) {
    return ConfusionRates::from_counts(count_outcomes(detections, truth, windows, match_radius));
}

} // namespace detangle
