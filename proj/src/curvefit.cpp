#include "detangle/curvefit.hpp"

#include <algorithm>
#include <optional>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

namespace detangle {

Midpoints pair_midpoints(std::span<const Pixel> contour) {
    if (contour.empty()) throw InvalidArgument("cannot pair an empty contour");
    const std::size_t len = contour.size();
    Midpoints m;
    m.points.reserve((len + 1) / 2);
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < (len + 1) / 2; ++i) {
        const Pixel a = contour[i];
        const Pixel b = contour[len - 1 - i];
        const Point2 mid{(a.x + b.x) / 2.0, (a.y + b.y) / 2.0};
        m.points.push_back(mid);
        sx += mid.x;
        sy += mid.y;
    }
    const double n = static_cast<double>(m.points.size());
    m.mean = {sx / n, sy / n};
    return m;
}

Midpoints pair_midpoints(const Contour& contour) { return pair_midpoints(contour.points); }

double CenterlinePoly::value(double t) const {
    const double u = (t - center) / scale;
    double acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * u + *it;
    return acc;
}

double CenterlinePoly::slope(double t) const {
    const double u = (t - center) / scale;
    double acc = 0.0;
    for (std::size_t k = coefficients.size(); k-- > 1;) acc = acc * u + static_cast<double>(k) * coefficients[k];
    return acc / scale;
}

Point2 CenterlinePoly::point_at(double t) const {
    return axis == FitAxis::XMajor ? Point2{t, value(t)} : Point2{value(t), t};
}

Point2 CenterlinePoly::tangent(double t) const {
    const double s = slope(t);
    const double norm = std::hypot(1.0, s);
    return axis == FitAxis::XMajor ? Point2{1.0 / norm, s / norm} : Point2{s / norm, 1.0 / norm};
}

double CenterlinePoly::orientation_deg(double t) const {
    const Point2 d = tangent(t);
    double deg = std::atan2(d.y, d.x) * 180.0 / std::numbers::pi;
    if (deg < 0.0) deg += 180.0;
    if (deg >= 180.0) deg -= 180.0;
    return deg;
}

CenterlinePoly make_polynomial(FitAxis axis, std::vector<double> power_coefficients) {
    if (power_coefficients.empty()) throw InvalidArgument("polynomial needs coefficients");
    CenterlinePoly p;
    p.axis = axis;
    p.degree = static_cast<int>(power_coefficients.size()) - 1;
    p.coefficients = std::move(power_coefficients);
    return p;
}

namespace {

Eigen::MatrixXd vandermonde(std::span<const double> t, double center, double scale, int degree) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(t.size()), degree + 1);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double u = (t[i] - center) / scale;
        double pw = 1.0;
        for (int k = 0; k <= degree; ++k) {
            a(static_cast<Eigen::Index>(i), k) = pw;
            pw *= u;
        }
    }
    return a;
}

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

} // namespace

double normal_condition(std::span<const double> abscissae, int degree) {
    const Eigen::MatrixXd a = vandermonde(abscissae, mean_of(abscissae), 1.0, degree);
    const Eigen::MatrixXd normal = a.transpose() * a;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

namespace {

struct LsFit {
    std::vector<double> coeffs;
    double center = 0.0;
    double scale = 1.0;
    double rms = 0.0;

    double operator()(double t) const {
        const double u = (t - center) / scale;
        double acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * u + *it;
        return acc;
    }
};

LsFit least_squares(std::span<const double> t, std::span<const double> v, int degree) {
    LsFit f;
    f.center = mean_of(t);
    for (double x : t) f.scale = std::max(f.scale, std::abs(x - f.center));
    const Eigen::MatrixXd a = vandermonde(t, f.center, f.scale, degree);
    const Eigen::Map<const Eigen::VectorXd> rhs(v.data(), static_cast<Eigen::Index>(v.size()));
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(rhs);
    f.coeffs.assign(c.data(), c.data() + c.size());
    f.rms = std::sqrt((a * c - rhs).squaredNorm() / static_cast<double>(t.size()));
    return f;
}

std::size_t distinct_count(std::span<const double> sorted) {
    std::size_t n = sorted.empty() ? 0 : 1;
    for (std::size_t i = 1; i < sorted.size(); ++i) n += sorted[i] != sorted[i - 1];
    return n;
}

// Largest miss on held-out samples when refitting without the outer fifth of
// the samples at either end. Input sorted by t. Empty when a refit would be
// underdetermined.
std::optional<double> holdout_error(std::span<const double> t, std::span<const double> v, int degree) {
    const std::size_t n = t.size();
    const std::size_t k = std::max<std::size_t>(1, (n + 2) / 5);
    if (n <= k) return std::nullopt;
    const std::size_t keep = n - k;
    double worst = 0.0;
    for (int side = 0; side < 2; ++side) {
        const std::size_t off = side == 0 ? 0 : k;
        const auto tk = t.subspan(off, keep);
        if (distinct_count(tk) < static_cast<std::size_t>(degree) + 1) return std::nullopt;
        const LsFit f = least_squares(tk, v.subspan(off, keep), degree);
        const std::size_t h0 = side == 0 ? keep : 0;
        for (std::size_t i = h0; i < h0 + k; ++i) worst = std::max(worst, std::abs(f(t[i]) - v[i]));
    }
    return worst;
}

} // namespace

CenterlinePoly fit_polynomial(const Midpoints& mids, const FitConfig& config) {
    if (config.max_degree < 1) throw InvalidArgument("max degree must be at least 1");
    const auto& pts = mids.points;
    if (pts.size() < 2) throw UnfittablePatch("need at least two midpoints");

    auto [xmin, xmax] = std::minmax_element(pts.begin(), pts.end(), [](auto a, auto b) { return a.x < b.x; });
    auto [ymin, ymax] = std::minmax_element(pts.begin(), pts.end(), [](auto a, auto b) { return a.y < b.y; });
    const double ext_x = xmax->x - xmin->x;
    const double ext_y = ymax->y - ymin->y;
    if (ext_x <= 0.0 && ext_y <= 0.0) throw UnfittablePatch("midpoints coincide");

    CenterlinePoly poly;
    poly.axis = ext_x >= ext_y ? FitAxis::XMajor : FitAxis::YMajor;
    std::vector<std::pair<double, double>> samples;
    samples.reserve(pts.size());
    for (auto p : pts)
        samples.emplace_back(poly.axis == FitAxis::XMajor ? p.x : p.y, poly.axis == FitAxis::XMajor ? p.y : p.x);
    std::sort(samples.begin(), samples.end());
    std::vector<double> t, v;
    for (auto [a, b] : samples) {
        t.push_back(a);
        v.push_back(b);
    }

    const int start = std::min(config.max_degree, static_cast<int>(distinct_count(t)) - 1);
    for (int m = start; m >= 1; --m) {
        const LsFit f = least_squares(t, v, m);
        const double holdout = holdout_error(t, v, m).value_or(std::numeric_limits<double>::infinity());
        const bool accepted = m == 1 || (f.rms <= config.tolerance_px &&
                                         normal_condition(t, m) <= config.max_condition &&
                                         holdout <= config.holdout_tolerance_px);
        if (accepted) {
            poly.degree = m;
            poly.coefficients = f.coeffs;
            poly.center = f.center;
            poly.scale = f.scale;
            poly.rms_residual = f.rms;
            return poly;
        }
    }
    throw UnfittablePatch("no polynomial degree accepted");  // unreachable: degree 1 always accepted
}

namespace {

template <typename F>
void bracket_roots(F&& f, double lo, double hi, std::vector<double>& roots) {
    const int steps = static_cast<int>(std::floor(hi - lo));
    std::vector<double> grid;
    for (int k = 0; k <= steps; ++k) grid.push_back(lo + k);
    if (grid.back() < hi) grid.push_back(hi);

    double prev_t = grid[0];
    double prev_f = f(prev_t);
    if (prev_f == 0.0) roots.push_back(prev_t);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur_t = grid[i];
        const double cur_f = f(cur_t);
        if (cur_f == 0.0) {
            roots.push_back(cur_t);
        } else if (prev_f != 0.0 && std::isfinite(prev_f) && std::isfinite(cur_f) &&
                   std::signbit(prev_f) != std::signbit(cur_f)) {
            double a = prev_t, b = cur_t, fa = prev_f;
            while (b - a > 1e-10) {
                const double mid = 0.5 * (a + b);
                const double fm = f(mid);
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                if (std::signbit(fm) == std::signbit(fa)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_t = cur_t;
        prev_f = cur_f;
    }
}

double angle_between_deg(Point2 a, Point2 b) {
    const double c = std::clamp(std::abs(a.x * b.x + a.y * b.y), 0.0, 1.0);
    return std::acos(c) * 180.0 / std::numbers::pi;
}

} // namespace

std::optional<IntersectionPoint> intersect(const CenterlinePoly& p, const CenterlinePoly& q,
                                           const WindowRect& rect, Point2 mean_p, Point2 mean_q) {
    const double xmax = rect.w - 1.0;
    const double ymax = rect.h - 1.0;
    std::vector<Point2> candidates;
    std::vector<double> roots;

    if (p.axis == q.axis) {
        const double hi = p.axis == FitAxis::XMajor ? xmax : ymax;
        bracket_roots([&](double t) { return p.value(t) - q.value(t); }, 0.0, hi, roots);
        for (double r : roots) candidates.push_back(p.point_at(r));
    } else {
        const CenterlinePoly& xm = p.axis == FitAxis::XMajor ? p : q;
        const CenterlinePoly& ym = p.axis == FitAxis::XMajor ? q : p;
        bracket_roots([&](double x) { return ym.value(xm.value(x)) - x; }, 0.0, xmax, roots);
        for (double r : roots) candidates.push_back(xm.point_at(r));
        roots.clear();
        bracket_roots([&](double y) { return xm.value(ym.value(y)) - y; }, 0.0, ymax, roots);
        for (double r : roots) {
            const Point2 c = ym.point_at(r);
            const bool seen = std::any_of(candidates.begin(), candidates.end(),
                                          [&](Point2 o) { return distance(o, c) < 1e-4; });
            if (!seen) candidates.push_back(c);
        }
    }

    constexpr double eps = 1e-9;
    std::optional<Point2> best;
    double best_score = std::numeric_limits<double>::infinity();
    for (Point2 c : candidates) {
        if (!(c.x >= -eps && c.y >= -eps && c.x <= xmax + eps && c.y <= ymax + eps)) continue;
        const double score = distance(c, mean_p) + distance(c, mean_q);
        const bool better = score < best_score - 1e-12 ||
                            (std::abs(score - best_score) <= 1e-12 && best &&
                             (c.x < best->x || (c.x == best->x && c.y < best->y)));
        if (better) {
            best = c;
            best_score = score;
        }
    }
    if (!best) return std::nullopt;

    auto abscissa = [](const CenterlinePoly& poly, Point2 pt) {
        return poly.axis == FitAxis::XMajor ? pt.x : pt.y;
    };
    IntersectionPoint ip;
    ip.position = {best->x + rect.x0, best->y + rect.y0};
    ip.crossing_angle_deg = angle_between_deg(p.tangent(abscissa(p, *best)), q.tangent(abscissa(q, *best)));
    return ip;
}

std::optional<IntersectionPoint> intersect(const CenterlinePoly& p, const CenterlinePoly& q,
                                           const WindowRect& rect) {
    const Point2 c{(rect.w - 1) / 2.0, (rect.h - 1) / 2.0};
    return intersect(p, q, rect, c, c);
}

std::optional<IntersectionPoint> intersect(const PatchAnalysis& a, const PatchAnalysis& b,
                                           const WindowRect& rect) {
    auto ip = intersect(a.poly, b.poly, rect, a.midpoints.mean, b.midpoints.mean);
    if (ip) {
        ip->patch_a = std::min(a.patch_id, b.patch_id);
        ip->patch_b = std::max(a.patch_id, b.patch_id);
    }
    return ip;
}

} // namespace detangle
