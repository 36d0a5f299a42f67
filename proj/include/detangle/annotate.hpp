#pragma once

#include <filesystem>
#include <span>

#include "detangle/raster.hpp"
#include "detangle/verdict.hpp"

namespace detangle {

/// Copy of `image` with a yellow cross-hair on every tangle and its confidence
/// printed beside it. Throws InvalidArgument if a tangle lies outside the image.
RgbImage annotate(const RgbImage& image, std::span<const Tangle> tangles);

void save_annotated(const RgbImage& image, std::span<const Tangle> tangles,
                    const std::filesystem::path& path);

} // namespace detangle
