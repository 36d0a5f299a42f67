#pragma once

#include <span>

#include "detangle/scanner.hpp"
#include "detangle/scene.hpp"
#include "detangle/verdict.hpp"

namespace detangle {

struct ConfusionCounts {
    int tp = 0;
    int tn = 0;
    int fp = 0;
    int fn = 0;

    int total() const { return tp + tn + fp + fn; }
    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp; tn += o.tn; fp += o.fp; fn += o.fn;
        return *this;
    }
};

struct ConfusionRates {
    double tp = 0.0;
    double tn = 0.0;
    double fp = 0.0;
    double fn = 0.0;

    /// (TP + TN) / (TP + TN + FP + FN)
    double accuracy() const;
    double sum() const { return tp + tn + fp + fn; }

    static ConfusionRates from_counts(const ConfusionCounts& counts);
};

/// Window-level scoring. A window is a positive if a crossing lies inside it.
/// A positive window is a TP when some detection lies within `match_radius`
/// of one of its crossings and names the right wire on top; otherwise it is an
/// FN, plus an FP when a detection sits in the window or near its crossing.
/// A negative window holding a detection that matches no crossing is an FP,
/// otherwise a TN.
ConfusionCounts count_outcomes(std::span<const Tangle> detections, const GroundTruth& truth,
                               std::span<const WindowRect> windows, double match_radius);

ConfusionRates evaluate(std::span<const Tangle> detections, const GroundTruth& truth,
                        std::span<const WindowRect> windows, double match_radius = 10.0);

/// True when the detection's over-patch orientation is closer to the over
/// wire's orientation than to the under wire's.
bool names_correct_over_wire(const Tangle& detection, const Crossing& crossing);

} // namespace detangle
