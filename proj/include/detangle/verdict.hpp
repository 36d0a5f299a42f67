#pragma once

#include <optional>
#include <span>
#include <vector>

#include "detangle/curvefit.hpp"
#include "detangle/edgedetect.hpp"
#include "detangle/scanner.hpp"

namespace detangle {

struct TangleCandidate {
    Point2 position;
    int over_patch = 0;
    /// Remaining patches, nearest first.
    std::vector<int> under_patches;
    double d_over = 0.0;
    double confidence = 0.0;
    CompassDirection direction = CompassDirection::N;
    WindowRect window;
    /// Orientation of the over patch's centerline at the crossing, [0, 180).
    double over_angle_deg = 0.0;
    double crossing_angle_deg = 0.0;
};

struct OverPatchRef {
    CompassDirection direction = CompassDirection::N;
    WindowRect window;
    int patch_id = 0;

    friend bool operator==(const OverPatchRef&, const OverPatchRef&) = default;
};

struct Tangle {
    Point2 position;
    OverPatchRef over_patch;
    double confidence = 0.0;
    int contributing_candidate_count = 1;
    double over_angle_deg = 0.0;
};

struct DecideConfig {
    double tie_epsilon_px = 0.5;
};

/// The patch whose midpoint mean lies nearest the intersection is the one on
/// top. Confidence is (d_w - d_min) / d_w. Returns nothing when fewer than two
/// patches are given or the two nearest are within the tie epsilon.
std::optional<TangleCandidate> decide_window(std::span<const PatchAnalysis> analyses,
                                             const IntersectionPoint& ip, const WindowRect& rect,
                                             CompassDirection direction,
                                             const DecideConfig& config = {});

/// Single-linkage clustering of candidate positions. Each cluster reports its
/// highest-confidence member; ties go to the earlier direction, then the
/// earlier window. Output is ordered by descending confidence.
std::vector<Tangle> merge_candidates(std::span<const TangleCandidate> candidates,
                                     double merge_radius);

} // namespace detangle
