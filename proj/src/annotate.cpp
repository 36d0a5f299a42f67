#include "detangle/annotate.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include "detangle/image_io.hpp"

namespace detangle {

namespace {

constexpr Rgb kYellow{255, 255, 0};
constexpr int kArm = 6;

// 3x5 glyphs, one row per entry, bit 2 = leftmost column.
constexpr std::array<std::array<std::uint8_t, 5>, 10> kDigits = {{
    {7, 5, 5, 5, 7}, {2, 6, 2, 2, 7}, {7, 1, 7, 4, 7}, {7, 1, 7, 1, 7}, {5, 5, 7, 1, 1},
    {7, 4, 7, 1, 7}, {7, 4, 7, 5, 7}, {7, 1, 1, 1, 1}, {7, 5, 7, 5, 7}, {7, 5, 7, 1, 7},
}};
constexpr std::array<std::uint8_t, 5> kDot = {0, 0, 0, 0, 2};

void plot(RgbImage& img, int x, int y, Rgb c) {
    if (img.contains(x, y)) img.set(x, y, c);
}

void draw_glyph(RgbImage& img, int x0, int y0, const std::array<std::uint8_t, 5>& glyph) {
    for (int row = 0; row < 5; ++row)
        for (int col = 0; col < 3; ++col)
            if (glyph[row] & (4 >> col)) plot(img, x0 + col, y0 + row, kYellow);
}

void draw_text(RgbImage& img, int x0, int y0, const std::string& text) {
    int x = x0;
    for (char ch : text) {
        if (ch >= '0' && ch <= '9') draw_glyph(img, x, y0, kDigits[ch - '0']);
        else if (ch == '.') draw_glyph(img, x, y0, kDot);
        x += 4;
    }
}

} // namespace

RgbImage annotate(const RgbImage& image, std::span<const Tangle> tangles) {
    RgbImage out = image;
    for (const auto& t : tangles) {
        const int cx = static_cast<int>(std::lround(t.position.x));
        const int cy = static_cast<int>(std::lround(t.position.y));
        if (!image.contains(cx, cy))
            throw InvalidArgument("tangle position outside image");
        for (int d = -kArm; d <= kArm; ++d) {
            plot(out, cx + d, cy, kYellow);
            plot(out, cx, cy + d, kYellow);
        }
        char buf[16];
        std::snprintf(buf, sizeof buf, "%.2f", t.confidence);
        draw_text(out, cx + kArm + 2, cy - kArm - 2, buf);
    }
    return out;
}

void save_annotated(const RgbImage& image, std::span<const Tangle> tangles,
                    const std::filesystem::path& path) {
    save_image(annotate(image, tangles), path);
}

} // namespace detangle
