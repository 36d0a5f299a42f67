#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "detangle/verdict.hpp"

namespace detangle {

/// Detection document: {"tangles":[{"x","y","over_patch":{"direction",
/// "window","patch_id"},"confidence","over_angle_deg"}]}, keys in that order.
std::string tangles_to_json(std::span<const Tangle> tangles);
std::vector<Tangle> tangles_from_json(std::string_view text);

} // namespace detangle
