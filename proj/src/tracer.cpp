#include "detangle/tracer.hpp"

#include <cstdlib>

namespace detangle {

namespace {

constexpr int kDx8[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy8[8] = {0, -1, -1, -1, 0, 1, 1, 1};
constexpr int kDx4[4] = {1, 0, -1, 0};
constexpr int kDy4[4] = {0, -1, 0, 1};

int search_start(int dir, Connectivity conn) {
    if (conn == Connectivity::Four) return (dir + 3) % 4;
    return dir % 2 == 0 ? (dir + 7) % 8 : (dir + 6) % 8;
}

} // namespace

std::optional<Pixel> find_start(const BinaryImage& region) {
    for (int y = 0; y < region.height(); ++y)
        for (int x = 0; x < region.width(); ++x)
            if (region.at(x, y)) return Pixel{x, y};
    return std::nullopt;
}

Pixel step(Pixel p, int direction, Connectivity conn) {
    if (conn == Connectivity::Four) return {p.x + kDx4[direction], p.y + kDy4[direction]};
    return {p.x + kDx8[direction], p.y + kDy8[direction]};
}

int direction_between(Pixel from, Pixel to, Connectivity conn) {
    const int n = conn == Connectivity::Four ? 4 : 8;
    for (int d = 0; d < n; ++d)
        if (step(from, d, conn) == to) return d;
    throw InvalidArgument("pixels are not neighbors");
}

Contour trace_contour(const BinaryImage& region, Pixel start, Connectivity conn) {
    return trace_contour(region, start, conn, conn == Connectivity::Four ? 0 : 7);
}

Contour trace_contour(const BinaryImage& region, Pixel start, Connectivity conn,
                      int initial_direction) {
    if (!region.foreground(start.x, start.y))
        throw InvalidArgument("contour start is not a foreground pixel");
    const int ndir = conn == Connectivity::Four ? 4 : 8;
    if (initial_direction < 0 || initial_direction >= ndir)
        throw InvalidArgument("initial direction out of range");

    Contour contour{{start}, conn};
    auto& pts = contour.points;
    // Every directed border step repeats at most once before the stop rule fires.
    const std::size_t limit = 2 * static_cast<std::size_t>(ndir) * region.width() * region.height() + 4;

    int dir = initial_direction;
    Pixel cur = start;
    while (pts.size() < limit) {
        const int first = search_start(dir, conn);
        bool moved = false;
        for (int k = 0; k < ndir; ++k) {
            const int d = (first + k) % ndir;
            const Pixel q = step(cur, d, conn);
            if (region.foreground(q.x, q.y)) {
                dir = d;
                cur = q;
                moved = true;
                break;
            }
        }
        if (!moved) return contour;  // isolated pixel

        pts.push_back(cur);
        const std::size_t n = pts.size() - 1;
        if (n >= 2 && pts[n] == pts[1] && pts[n - 1] == pts[0]) {
            pts.resize(n - 1);
            return contour;
        }
    }
    throw Error("contour tracing did not terminate");
}

} // namespace detangle
