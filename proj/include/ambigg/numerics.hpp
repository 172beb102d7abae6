#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace ambigg {

// Default tolerances and scan densities shared across the solver stack.
// All are overridable at each call site.
inline constexpr double kRootTol = 1e-10;
inline constexpr double kQuadTol = 1e-10;
inline constexpr double kMinimizeTol = 1e-9;
inline constexpr int kKappaScanPoints = 512;
inline constexpr int kXiScanPoints = 256;

/// Closed interval [lo, hi] with finite endpoints.
struct Interval {
    double lo{0.0};
    double hi{0.0};

    Interval() = default;
    Interval(double lo_, double hi_);

    double length() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return x >= lo && x <= hi; }
    bool is_singleton() const { return lo == hi; }
};

/// Roots found on a scan window, sorted ascending.
/// `grazing` holds best-effort tangential roots (no sign change).
struct RootSet {
    std::vector<double> roots;
    std::vector<double> grazing;
    double residual_tol{kRootTol};
    int scan_points{kKappaScanPoints};

    bool empty() const { return roots.empty(); }
    std::size_t size() const { return roots.size(); }
};

struct NormalValues {
    double pdf;
    double cdf;
};

/// Standard normal density and distribution function at z.
NormalValues std_normal(double z);

/// Inverse of the standard normal cdf. Throws std::domain_error unless 0 < p < 1.
double std_normal_quantile(double p);

using RealFn = std::function<double(double)>;

/// Scans `window` on a uniform grid and refines every sign change by
/// bracketed bisection with secant acceleration until |f(r)| <= tol.
/// A grid point with f exactly 0 is itself taken as the root.
RootSet find_roots(const RealFn& f, Interval window, int scan_points = kKappaScanPoints,
                   double tol = kRootTol);

struct MinResult {
    double argmin;
    double min;
};

/// Coarse grid scan followed by golden-section refinement around the best
/// grid cell and both endpoint cells. The result never exceeds any grid sample.
MinResult minimize_on_interval(const RealFn& f, Interval window, int scan_points = kXiScanPoints,
                               double tol = kMinimizeTol);

struct QuadResult {
    double value;
    bool converged; // false: recursion depth exhausted somewhere (accuracy warning)
};

/// Adaptive Simpson quadrature over `window` with local error control.
/// `converged` turns false when some cell exhausts `max_depth` before
/// meeting its share of the tolerance.
QuadResult integrate_adaptive(const RealFn& f, Interval window, double tol = kQuadTol,
                              int max_depth = 60);

} // namespace ambigg
