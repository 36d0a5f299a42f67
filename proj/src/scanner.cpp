#include "detangle/scanner.hpp"

#include <algorithm>

namespace detangle {

namespace {

std::vector<int> placements(int extent, int size, int stride) {
    // A stride wider than the window would skip pixels.
    const int step = std::min(stride, size);
    std::vector<int> starts;
    for (int s = 0; s + size <= extent; s += step) starts.push_back(s);
    if (starts.empty() || starts.back() + size < extent) starts.push_back(extent - size);
    return starts;
}

} // namespace

std::vector<WindowRect> windows(int image_w, int image_h, int w, int h, int stride) {
    if (w < 1 || h < 1 || stride < 1) throw InvalidArgument("window size and stride must be >= 1");
    if (image_w < 1 || image_h < 1) throw InvalidArgument("image dimensions must be positive");
    w = std::min(w, image_w);
    h = std::min(h, image_h);
    const auto xs = placements(image_w, w, stride);
    const auto ys = placements(image_h, h, stride);
    std::vector<WindowRect> out;
    out.reserve(xs.size() * ys.size());
    for (int y : ys)
        for (int x : xs) out.push_back({x, y, w, h});
    return out;
}

std::vector<WindowRect> windows(int image_w, int image_h, const WindowConfig& config) {
    return windows(image_w, image_h, config.w, config.h, config.stride);
}

std::vector<Patch> extract_patches(const BinaryImage& edges, const WindowRect& rect,
                                   int min_patch_pixels) {
    if (rect.x0 < 0 || rect.y0 < 0 || rect.w < 1 || rect.h < 1 ||
        rect.x0 + rect.w > edges.width() || rect.y0 + rect.h > edges.height())
        throw InvalidArgument("window outside image");

    std::vector<int> label(static_cast<std::size_t>(rect.w) * rect.h, -1);
    auto fg = [&](int x, int y) { return edges.at(rect.x0 + x, rect.y0 + y); };
    auto idx = [&](int x, int y) { return static_cast<std::size_t>(y) * rect.w + x; };

    std::vector<Patch> patches;
    std::vector<Pixel> stack;
    int next = 0;
    for (int y = 0; y < rect.h; ++y) {
        for (int x = 0; x < rect.w; ++x) {
            if (!fg(x, y) || label[idx(x, y)] >= 0) continue;
            Patch p;
            p.min = p.max = {x, y};
            label[idx(x, y)] = next;
            stack.assign(1, {x, y});
            while (!stack.empty()) {
                const Pixel c = stack.back();
                stack.pop_back();
                p.pixels.push_back(c);
                p.min = {std::min(p.min.x, c.x), std::min(p.min.y, c.y)};
                p.max = {std::max(p.max.x, c.x), std::max(p.max.y, c.y)};
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = c.x + dx, ny = c.y + dy;
                        if (nx < 0 || ny < 0 || nx >= rect.w || ny >= rect.h) continue;
                        if (!fg(nx, ny) || label[idx(nx, ny)] >= 0) continue;
                        label[idx(nx, ny)] = next;
                        stack.push_back({nx, ny});
                    }
            }
            ++next;
            if (static_cast<int>(p.pixels.size()) < min_patch_pixels) continue;
            std::sort(p.pixels.begin(), p.pixels.end(),
                      [](Pixel a, Pixel b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
            p.id = static_cast<int>(patches.size());
            patches.push_back(std::move(p));
        }
    }
    return patches;
}

BinaryImage patch_mask(const Patch& patch, const WindowRect& rect) {
    BinaryImage mask(rect.w, rect.h);
    for (Pixel p : patch.pixels) mask.set(p.x, p.y, true);
    return mask;
}

} // namespace detangle
