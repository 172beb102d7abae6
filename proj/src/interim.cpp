#include "ambigg/interim.hpp"

#include <cmath>
#include <limits>

#include "ambigg/errors.hpp"

namespace ambigg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPosteriorTailSds = 8.0; // truncation leaves < 1e-15 mass
} // namespace

double interim_payoff_linear(double eta, double y, double xi, double x, double kappa) {
    const double mean = (eta * y + xi * x) / (eta + xi);
    if (kappa == -kInf) return mean;
    if (kappa == kInf) return mean - 1.0;
    const double slope = std::sqrt(xi * (eta + xi) / (eta + 2.0 * xi));
    return mean - std_normal(slope * (kappa - mean)).cdf;
}

double interim_payoff_general(const PayoffModel& model, const PriorFamily& priors,
                              const InterimQuery& q, double quad_tol, bool* quad_warning) {
    if (model.safe_action && *model.safe_action == q.action) {
        return model.safe_value;
    }
    const auto post = posterior_params(priors, q.xi.own, q.x);
    const double sd = 1.0 / std::sqrt(post.precision);
    const double lo = post.mean - kPosteriorTailSds * sd;
    const double hi = post.mean + kPosteriorTailSds * sd;

    const double norm = std::sqrt(post.precision);
    auto integrand = [&](double theta) {
        const double l = opponent_mass(priors, q.xi.others, q.kappa, theta);
        return model.payoff(q.action, l, theta) * norm * std_normal((theta - post.mean) * norm).pdf;
    };

    std::optional<double> split;
    if (model.integrand_split) {
        split = model.integrand_split(q.kappa, q.xi.others);
    }

    double value = 0.0;
    bool converged = true;
    if (split && *split > lo && *split < hi) {
        const auto left = integrate_adaptive(integrand, Interval{lo, *split}, quad_tol);
        const auto right = integrate_adaptive(integrand, Interval{*split, hi}, quad_tol);
        value = left.value + right.value;
        converged = left.converged && right.converged;
    } else {
        const auto whole = integrate_adaptive(integrand, Interval{lo, hi}, quad_tol);
        value = whole.value;
        converged = whole.converged;
    }
    if (quad_warning && !converged) *quad_warning = true;
    return value;
}

double interim_payoff(const PayoffModel& model, const PriorFamily& priors, const InterimQuery& q) {
    if (model.closed_form) {
        return model.closed_form(q.action, q.x, q.kappa, q.xi.own, q.xi.others);
    }
    return interim_payoff_general(model, priors, q);
}

namespace {

// Detects whether the sampled payoff is flat in xi and whether several grid
// points tie for the minimum.
void classify_flatness(const RealFn& f, Interval range, int scan_points, double min_value,
                       MeuResult* out) {
    const int n = std::max(scan_points / 8, 9);
    double lo = kInf, hi = -kInf;
    int near_min = 0;
    for (int i = 0; i < n; ++i) {
        const double xi = range.lo + range.length() * i / (n - 1);
        const double v = f(xi);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        if (std::abs(v - min_value) <= 1e-10 * (1.0 + std::abs(min_value))) ++near_min;
    }
    const double scale = 1.0 + std::abs(min_value);
    out->degenerate = (hi - lo) <= 1e-12 * scale;
    out->tied = !out->degenerate && near_min > 1;
}

} // namespace

MeuResult meu_payoff(const PayoffModel& model, const PriorFamily& priors,
                     const AmbiguitySet& ambiguity, int action, double x, double kappa,
                     int scan_points, double tol) {
    MeuResult result;
    if (ambiguity.kind == AmbiguitySet::Kind::interval) {
        auto value_at = [&](double xi) {
            return interim_payoff(model, priors, {action, x, kappa, Precision(xi)});
        };
        if (ambiguity.xi.is_singleton()) {
            result.value = value_at(ambiguity.xi.lo);
            result.argmin_own = ambiguity.xi.lo;
            result.attained_on_boundary = true;
            result.degenerate = model.safe_action && *model.safe_action == action;
            return result;
        }
        const auto m = minimize_on_interval(value_at, ambiguity.xi, scan_points, tol);
        result.value = m.min;
        result.argmin_own = m.argmin;
        const double edge = tol * (1.0 + std::abs(ambiguity.xi.lo) + std::abs(ambiguity.xi.hi));
        result.attained_on_boundary = std::abs(m.argmin - ambiguity.xi.lo) <= 10.0 * edge ||
                                      std::abs(m.argmin - ambiguity.xi.hi) <= 10.0 * edge;
        classify_flatness(value_at, ambiguity.xi, scan_points, m.min, &result);
        return result;
    }

    // Product mode: grid scan over the two precisions, then coordinate-wise
    // golden-section refinement from the best cell.
    auto value_at = [&](double own, double others) {
        return interim_payoff(model, priors, {action, x, kappa, Precision(own, others)});
    };
    const int g = 64;
    double best_v = kInf, best_own = ambiguity.xi_own.lo, best_others = ambiguity.xi_others.lo;
    for (int i = 0; i < g; ++i) {
        const double own = ambiguity.xi_own.is_singleton()
                               ? ambiguity.xi_own.lo
                               : ambiguity.xi_own.lo + ambiguity.xi_own.length() * i / (g - 1);
        for (int j = 0; j < g; ++j) {
            const double others =
                ambiguity.xi_others.is_singleton()
                    ? ambiguity.xi_others.lo
                    : ambiguity.xi_others.lo + ambiguity.xi_others.length() * j / (g - 1);
            const double v = value_at(own, others);
            if (v < best_v) {
                best_v = v;
                best_own = own;
                best_others = others;
            }
            if (ambiguity.xi_others.is_singleton()) break;
        }
        if (ambiguity.xi_own.is_singleton()) break;
    }
    for (int pass = 0; pass < 2; ++pass) {
        if (!ambiguity.xi_own.is_singleton()) {
            const auto m = minimize_on_interval(
                [&](double own) { return value_at(own, best_others); }, ambiguity.xi_own, 33, tol);
            if (m.min <= best_v) {
                best_v = m.min;
                best_own = m.argmin;
            }
        }
        if (!ambiguity.xi_others.is_singleton()) {
            const auto m = minimize_on_interval(
                [&](double others) { return value_at(best_own, others); }, ambiguity.xi_others, 33,
                tol);
            if (m.min <= best_v) {
                best_v = m.min;
                best_others = m.argmin;
            }
        }
    }
    result.value = best_v;
    result.argmin_own = best_own;
    result.argmin_others = best_others;
    const double e1 = tol * (1.0 + std::abs(ambiguity.xi_own.lo) + std::abs(ambiguity.xi_own.hi));
    const double e2 =
        tol * (1.0 + std::abs(ambiguity.xi_others.lo) + std::abs(ambiguity.xi_others.hi));
    result.attained_on_boundary = std::abs(best_own - ambiguity.xi_own.lo) <= 10.0 * e1 ||
                                  std::abs(best_own - ambiguity.xi_own.hi) <= 10.0 * e1 ||
                                  std::abs(best_others - ambiguity.xi_others.lo) <= 10.0 * e2 ||
                                  std::abs(best_others - ambiguity.xi_others.hi) <= 10.0 * e2;
    result.degenerate = model.safe_action && *model.safe_action == action;
    return result;
}

double payoff_gap(const PayoffModel& model, const PriorFamily& priors,
                  const AmbiguitySet& ambiguity, double x, double kappa, int scan_points,
                  double tol) {
    const auto act = meu_payoff(model, priors, ambiguity, 1, x, kappa, scan_points, tol);
    const auto stay = meu_payoff(model, priors, ambiguity, 0, x, kappa, scan_points, tol);
    return act.value - stay.value;
}

SmoothResult smooth_aggregate(const PayoffModel& model, const PriorFamily& priors,
                              Interval xi_range, double alpha, int action, double x, double kappa) {
    if (!(alpha > 0.0)) throw std::invalid_argument("smooth_aggregate requires alpha > 0");
    if (!(xi_range.hi > xi_range.lo)) {
        throw std::invalid_argument("smooth_aggregate requires a nondegenerate xi interval");
    }

    auto value_at = [&](double xi) {
        return interim_payoff(model, priors, {action, x, kappa, Precision(xi)});
    };
    // Shift by the worst case so the exponentiated integrand lives in (0, 1].
    const double worst = minimize_on_interval(value_at, xi_range).min;
    auto shifted = [&](double xi) { return std::exp(-alpha * (value_at(xi) - worst)); };
    const auto integral = integrate_adaptive(shifted, xi_range, 1e-12);
    const double mean = integral.value / xi_range.length();
    if (!(mean > 0.0) || !std::isfinite(mean)) {
        throw NumericalError("smooth_aggregate: aggregated mass underflowed");
    }
    const double certainty_equivalent = worst - std::log(mean) / alpha;
    const double exponent = -alpha * certainty_equivalent;
    if (exponent > 700.0) {
        throw NumericalError("smooth_aggregate: aggregate overflows; certainty equivalent "
                             "is too negative for this alpha");
    }
    return {-std::exp(exponent) / alpha, certainty_equivalent};
}

} // namespace ambigg
