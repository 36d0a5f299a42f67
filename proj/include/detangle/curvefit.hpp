#pragma once

#include <optional>
#include <span>
#include <vector>

#include "detangle/scanner.hpp"
#include "detangle/tracer.hpp"

namespace detangle {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(Point2, Point2) = default;
};

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Centerline samples recovered from a contour, with their mean.
struct Midpoints {
    std::vector<Point2> points;
    Point2 mean;
};

/// Pairs contour point i with point L-1-i (the middle point of an odd-length
/// contour pairs with itself) and averages each pair.
Midpoints pair_midpoints(const Contour& contour);
Midpoints pair_midpoints(std::span<const Pixel> contour);

enum class FitAxis {
    XMajor,  ///< y = p(x)
    YMajor,  ///< x = p(y)
};

struct FitConfig {
    int max_degree = 5;
    double tolerance_px = 1.5;
    /// Upper bound on the condition number of the centered normal matrix.
    double max_condition = 1e8;
    /// A degree is also rejected when a refit without either end fifth of the
    /// samples misses a held-out sample by more than this.
    double holdout_tolerance_px = 0.5;
};

/// Least-squares polynomial along one image axis. Coefficients are in the
/// shifted, scaled abscissa u = (t - center) / scale, lowest order first.
struct CenterlinePoly {
    FitAxis axis = FitAxis::XMajor;
    int degree = 1;
    std::vector<double> coefficients;
    double center = 0.0;
    double scale = 1.0;
    double rms_residual = 0.0;

    /// Dependent coordinate at abscissa t.
    double value(double t) const;
    double slope(double t) const;
    /// Point on the curve at abscissa t.
    Point2 point_at(double t) const;
    /// Unit tangent direction at abscissa t, in image (x, y) order.
    Point2 tangent(double t) const;
    /// Line orientation at abscissa t in degrees, folded to [0, 180).
    double orientation_deg(double t) const;
};

/// Builds a power-basis polynomial y = sum c_k x^k (or x = sum c_k y^k).
CenterlinePoly make_polynomial(FitAxis axis, std::vector<double> power_coefficients);

/// Condition number of the normal matrix of a degree-`degree` fit in
/// mean-centered pixel units.
double normal_condition(std::span<const double> abscissae, int degree);

/// Degree selection: start at min(max_degree, distinct abscissae - 1) and step
/// down until the fit is well-conditioned and within tolerance; degree 1 is
/// always accepted. The axis with the larger extent is the abscissa.
///
/// Throws UnfittablePatch when neither axis has two distinct abscissae.
CenterlinePoly fit_polynomial(const Midpoints& mids, const FitConfig& config = {});

/// Geometry derived from a single patch, in window-local coordinates.
struct PatchAnalysis {
    int patch_id = 0;
    Contour contour;
    Midpoints midpoints;
    CenterlinePoly poly;
};

struct IntersectionPoint {
    /// Image coordinates.
    Point2 position;
    int patch_a = 0;
    int patch_b = 0;
    /// Angle between the two centerlines at the crossing, in [0, 90].
    double crossing_angle_deg = 0.0;
};

/// Crossing of two window-local centerlines. Roots are bracketed on a 1-pixel
/// grid across the window and refined by bisection; among roots inside the
/// window, the one closest (summed distance) to the two midpoint means wins.
std::optional<IntersectionPoint> intersect(const CenterlinePoly& p, const CenterlinePoly& q,
                                           const WindowRect& rect, Point2 mean_p, Point2 mean_q);
/// Disambiguates multiple roots by distance to the window center.
std::optional<IntersectionPoint> intersect(const CenterlinePoly& p, const CenterlinePoly& q,
                                           const WindowRect& rect);
std::optional<IntersectionPoint> intersect(const PatchAnalysis& a, const PatchAnalysis& b,
                                           const WindowRect& rect);

} // namespace detangle
