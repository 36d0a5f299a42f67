#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include "detangle/curvefit.hpp"
#include "detangle/preprocess.hpp"
#include "detangle/scanner.hpp"
#include "detangle/tracer.hpp"
#include "detangle/verdict.hpp"

namespace detangle {

enum class ExecutionMode { Sequential, Concurrent };

struct PipelineConfig {
    std::optional<ColorTarget> color;
    BlurConfig blur = BlurConfig::indoor();
    WindowConfig window;
    Connectivity connectivity = Connectivity::Eight;
    FitConfig fit;
    DecideConfig decide;
    /// Patch pairs whose midpoint principal axes differ by less than this are not intersected.
    double min_crossing_angle_deg = 20.0;
    /// Intersections farther than this from every midpoint of either patch are ignored.
    double max_reach_px = 12.0;
    /// Intersections this close to a window edge are left to an overlapping window.
    double border_margin_px = 8.0;
    double merge_radius_px = 10.0;
    double match_radius_px = 10.0;
    ExecutionMode mode = ExecutionMode::Sequential;

    /// Throws InvalidArgument describing the first bad field.
    void validate() const;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys and
/// malformed values throw InvalidArgument.
PipelineConfig parse_config(std::string_view text, PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path);

} // namespace detangle
