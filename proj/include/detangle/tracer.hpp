#pragma once

#include <optional>
#include <vector>

#include "detangle/raster.hpp"

namespace detangle {

enum class Connectivity { Four, Eight };

/// Ordered border pixels P0 .. P(n-2) of a region.
struct Contour {
    std::vector<Pixel> points;
    Connectivity connectivity = Connectivity::Eight;
};

/// First foreground pixel in raster order.
std::optional<Pixel> find_start(const BinaryImage& region);

/// Direction codes. Eight-connectivity: 0 = E, then counter-clockwise in steps
/// of 45 degrees (2 = N, 4 = W, 6 = S). Four-connectivity: 0 = E, 1 = N, 2 = W, 3 = S.
Pixel step(Pixel p, int direction, Connectivity conn);
/// Code of the move from `from` to the neighbor `to`.
int direction_between(Pixel from, Pixel to, Connectivity conn);

/// Border following. The direction variable starts at 0 (four) or 7 (eight);
/// each step scans the neighborhood counter-clockwise beginning at
/// (dir + 3) mod 4, or (dir + 7) mod 8 for even / (dir + 6) mod 8 for odd dir,
/// and moves to the first foreground pixel. Tracing stops once the first two
/// pixels repeat in order; the repeated pair is not part of the result.
///
/// An isolated pixel yields a one-point contour. Throws InvalidArgument when
/// `start` is background.
Contour trace_contour(const BinaryImage& region, Pixel start,
                      Connectivity conn = Connectivity::Eight);

/// Same as above with an explicit initial direction, for resuming a trace
/// from the middle of an existing contour.
Contour trace_contour(const BinaryImage& region, Pixel start, Connectivity conn,
                      int initial_direction);

} // namespace detangle
