#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "detangle/raster.hpp"

namespace detangle {

/// Decodes a binary PPM (P6, maxval 255) or an 8-bit PNG. Format is sniffed
/// from the leading bytes, not the extension.
///
/// Throws FileNotFound, UnsupportedFormat or CorruptData.
RgbImage load_image(const std::filesystem::path& path);

/// Writes P6 when the extension is .ppm (or unknown), PNG for .png.
void save_image(const RgbImage& image, const std::filesystem::path& path);

RgbImage decode_ppm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_ppm(const RgbImage& image);

/// True when the library was built with libpng.
bool png_supported();

} // namespace detangle
