#pragma once

// Test-side reference implementations, independent of the library's
// numerical paths. Slow and simple on purpose.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracles {

// High-precision standard normal cdf in long double arithmetic:
// a power series around 0 for small |z| and the Mills-ratio continued
// fraction in the tails.
inline long double normal_cdf_reference(long double z) {
    const long double az = fabsl(z);
    long double tail_or_half;
    if (az <= 2.0L) {
        // Phi(z) = 1/2 + phi(z) * sum_{n>=0} z^(2n+1) / (1*3*5*...*(2n+1))
        const long double phi =
            expl(-0.5L * z * z) * 0.398942280401432677939946059934381868L;
        long double term = z;
        long double sum = z;
        for (int n = 1; n < 200; ++n) {
            term *= z * z / (2.0L * n + 1.0L);
            sum += term;
            if (fabsl(term) < 1e-25L * fabsl(sum)) break;
        }
        return 0.5L + phi * sum;
    }
    // Q(z) = phi(z) / (z + 1/(z + 2/(z + 3/(...)))) for z > 0
    long double denom = az;
    for (int k = 400; k >= 1; --k) {
        denom = az + k / denom;
    }
    const long double phi = expl(-0.5L * az * az) * 0.398942280401432677939946059934381868L;
    tail_or_half = phi / denom;
    return z > 0 ? 1.0L - tail_or_half : tail_or_half;
}

// Quantile by bisection on the reference cdf.
inline double normal_quantile_reference(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("p outside (0,1)");
    long double lo = -40.0L, hi = 40.0L;
    for (int i = 0; i < 200; ++i) {
        const long double mid = 0.5L * (lo + hi);
        if (normal_cdf_reference(mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return double(0.5L * (lo + hi));
}

// Global minimum over a dense uniform grid.
inline std::pair<double, double> dense_grid_min(const std::function<double(double)>& f, double lo,
                                                double hi, int points) {
    double best_x = lo, best_v = f(lo);
    for (int i = 1; i < points; ++i) {
        const double x = lo + (hi - lo) * i / (points - 1);
        const double v = f(x);
        if (v < best_v) {
            best_v = v;
            best_x = x;
        }
    }
    return {best_x, best_v};
}

// Fixed point of theta = Phi(sqrt(xi) (kappa - theta)) by plain bisection.
inline double theta_star_reference(double kappa, double xi) {
    auto h = [&](long double theta) {
        return theta - normal_cdf_reference(sqrtl((long double)xi) * ((long double)kappa - theta));
    };
    long double a = 0.0L, b = 1.0L;
    for (int i = 0; i < 200; ++i) {
        const long double m = 0.5L * (a + b);
        if (h(m) < 0.0L) {
            a = m;
        } else {
            b = m;
        }
    }
    return double(0.5L * (a + b));
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

} // namespace oracles
