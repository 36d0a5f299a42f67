#pragma once

#include <vector>

#include "detangle/config.hpp"
#include "detangle/edgedetect.hpp"
#include "detangle/raster.hpp"
#include "detangle/verdict.hpp"

namespace detangle {

struct PipelineResult {
    std::vector<Tangle> tangles;
    /// Every per-window decision, grouped by direction then window order.
    std::vector<TangleCandidate> candidates;
    /// Directions whose response histogram was degenerate.
    std::vector<CompassDirection> skipped_directions;
};

/// Color isolation, blur and grayscale conversion.
GrayImage prepare(const RgbImage& image, const PipelineConfig& config);

/// Traces, fits and intersects every patch in one window of an edge map.
std::vector<TangleCandidate> analyze_window(const BinaryImage& edges, const WindowRect& rect,
                                            CompassDirection direction,
                                            const PipelineConfig& config);

/// Candidates from a single compass direction, in window order. Empty when
/// the direction's response is degenerate.
std::vector<TangleCandidate> analyze_direction(const GrayImage& gray, CompassDirection direction,
                                               const PipelineConfig& config,
                                               bool* degenerate = nullptr);

PipelineResult run_pipeline(const RgbImage& image, const PipelineConfig& config);

} // namespace detangle
