#include "ambigg/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ambigg/errors.hpp"

namespace ambigg {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kInvSqrt2 = 0.70710678118654752440;

double checked_eval(const RealFn& f, double x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
        throw EvaluationError("non-finite function value", x);
    }
    return v;
}

// Acklam's rational approximation for the probit function, accurate to
// ~1.15e-9 relative; refined below by Halley steps against std_normal.
double probit_seed(double p) {
    static constexpr std::array<double, 6> a = {
        -3.969683028665376e+01, 2.209460984245205e+02,  -2.759285104469687e+02,
        1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 6> b = {
        -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
        6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr std::array<double, 6> c = {
        -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
        -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                                2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

} // namespace

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(std::isfinite(lo) && std::isfinite(hi)) || lo > hi) {
        throw std::invalid_argument("Interval requires finite lo <= hi");
    }
}

NormalValues std_normal(double z) {
    return {kInvSqrt2Pi * std::exp(-0.5 * z * z), 0.5 * std::erfc(-z * kInvSqrt2)};
}

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("std_normal_quantile requires 0 < p < 1");
    }
    double x = probit_seed(p);
    for (int i = 0; i < 2; ++i) {
        const auto [pdf, cdf] = std_normal(x);
        if (pdf <= 0.0) break; // far tail: seed already saturates double precision
        const double u = (cdf - p) / pdf;
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

namespace {

// Bracketed root polish: bisection with a secant trial each iteration.
// fa and fb must have opposite signs.
double polish_root(const RealFn& f, double a, double b, double fa, double fb, double tol) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    double best_x = std::abs(fa) < std::abs(fb) ? a : b;
    double best_f = std::min(std::abs(fa), std::abs(fb));

    for (int it = 0; it < 200; ++it) {
        double x = 0.5 * (a + b);
        const double denom = fb - fa;
        if (denom != 0.0) {
            const double s = b - fb * (b - a) / denom;
            if (s > a && s < b) x = s;
        }
        const double fx = checked_eval(f, x);
        if (std::abs(fx) < best_f) {
            best_f = std::abs(fx);
            best_x = x;
        }
        if (std::abs(fx) <= tol) return x;
        if ((fa < 0.0) == (fx < 0.0)) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if (b - a <= std::numeric_limits<double>::epsilon() * (1.0 + std::abs(a) + std::abs(b))) {
            break;
        }
    }
    return best_x;
}

// Golden-section minimization on [a, b]; returns the best of the probes and
// both endpoints. xtol is measured on the abscissa.
MinResult golden_section(const RealFn& f, double a, double b, double fa, double fb, double xtol) {
    constexpr double invphi = 0.61803398874989484820;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = checked_eval(f, x1);
    double f2 = checked_eval(f, x2);
    while (b - a > xtol * (1.0 + std::abs(a) + std::abs(b))) {
        if (f1 <= f2) {
            b = x2;
            fb = f2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = checked_eval(f, x1);
        } else {
            a = x1;
            fa = f1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = checked_eval(f, x2);
        }
    }
    MinResult best{a, fa};
    if (f1 < best.min) best = {x1, f1};
    if (f2 < best.min) best = {x2, f2};
    if (fb < best.min) best = {b, fb};
    return best;
}

} // namespace

RootSet find_roots(const RealFn& f, Interval window, int scan_points, double tol) {
    if (scan_points < 2) {
        throw std::invalid_argument("find_roots requires scan_points >= 2");
    }
    const int n = scan_points;
    std::vector<double> xs(n), fs(n);
    const double step = window.length() / (n - 1);
    for (int i = 0; i < n; ++i) {
        xs[i] = (i == n - 1) ? window.hi : window.lo + step * i;
        fs[i] = checked_eval(f, xs[i]);
    }

    RootSet out;
    out.residual_tol = tol;
    out.scan_points = scan_points;

    for (int i = 0; i < n; ++i) {
        if (fs[i] == 0.0) {
            out.roots.push_back(xs[i]);
        }
    }
    for (int i = 0; i + 1 < n; ++i) {
        if (fs[i] == 0.0 || fs[i + 1] == 0.0) continue;
        if ((fs[i] < 0.0) != (fs[i + 1] < 0.0)) {
            out.roots.push_back(polish_root(f, xs[i], xs[i + 1], fs[i], fs[i + 1], tol));
        }
    }

    // Tangential roots: a strict interior minimum of |f| that dips to ~0
    // without changing sign. Best effort only.
    for (int i = 1; i + 1 < n; ++i) {
        const double ai = std::abs(fs[i]);
        if (ai == 0.0 || ai > 1e4 * tol) continue;
        if (ai <= std::abs(fs[i - 1]) && ai <= std::abs(fs[i + 1]) &&
            (fs[i - 1] < 0.0) == (fs[i + 1] < 0.0) && (fs[i] < 0.0) == (fs[i - 1] < 0.0)) {
            auto m = golden_section([&](double x) { return std::abs(f(x)); }, xs[i - 1], xs[i + 1],
                                    std::abs(fs[i - 1]), std::abs(fs[i + 1]), 1e-12);
            if (m.min <= tol) out.grazing.push_back(m.argmin);
        }
    }

    std::sort(out.roots.begin(), out.roots.end());
    const double merge_eps = std::max(1e-9 * (1.0 + std::abs(window.lo) + std::abs(window.hi)), step * 1e-6);
    out.roots.erase(std::unique(out.roots.begin(), out.roots.end(),
                                [&](double p, double q) { return std::abs(p - q) < merge_eps; }),
                    out.roots.end());
    std::sort(out.grazing.begin(), out.grazing.end());
    out.grazing.erase(std::remove_if(out.grazing.begin(), out.grazing.end(),
                                     [&](double g) {
                                         for (double r : out.roots) {
                                             if (std::abs(g - r) < merge_eps) return true;
                                         }
                                         return false;
                                     }),
                      out.grazing.end());
    return out;
}

MinResult minimize_on_interval(const RealFn& f, Interval window, int scan_points, double tol) {
    if (scan_points < 2) {
        throw std::invalid_argument("minimize_on_interval requires scan_points >= 2");
    }
    if (window.is_singleton()) {
        return {window.lo, checked_eval(f, window.lo)};
    }
    const int n = scan_points;
    std::vector<double> xs(n), fs(n);
    const double step = window.length() / (n - 1);
    int best = 0;
    for (int i = 0; i < n; ++i) {
        xs[i] = (i == n - 1) ? window.hi : window.lo + step * i;
        fs[i] = checked_eval(f, xs[i]);
        if (fs[i] < fs[best]) best = i;
    }

    MinResult result{xs[best], fs[best]};
    auto consider = [&](int lo_idx, int hi_idx) {
        const MinResult m =
            golden_section(f, xs[lo_idx], xs[hi_idx], fs[lo_idx], fs[hi_idx], tol);
        if (m.min < result.min) result = m;
    };
    consider(std::max(0, best - 1), std::min(n - 1, best + 1));
    consider(0, 1);
    consider(n - 2, n - 1);
    return result;
}

namespace {

struct SimpsonState {
    const RealFn& f;
    bool converged = true;

    double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                   int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = checked_eval(f, lm);
        const double frm = checked_eval(f, rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double refined = left + right;
        const double err = (refined - whole) / 15.0;
        // Conservative acceptance: leaf estimates can share a sign, so keep
        // each an order below its budget.
        if (std::abs(err) <= 0.05 * tol) {
            return refined + err;
        }
        if (depth <= 0) {
            converged = false;
            return refined + err;
        }
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
};

} // namespace

QuadResult integrate_adaptive(const RealFn& f, Interval window, double tol, int max_depth) {
    if (window.is_singleton()) return {0.0, true};
    const double a = window.lo;
    const double b = window.hi;
    const double fa = checked_eval(f, a);
    const double fb = checked_eval(f, b);
    const double m = 0.5 * (a + b);
    const double fm = checked_eval(f, m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);

    SimpsonState state{f};
    const double scaled_tol = tol * (1.0 + std::abs(whole));
    const double value = state.recurse(a, b, fa, fm, fb, whole, scaled_tol, max_depth);
    return {value, state.converged};
}

} // namespace ambigg
