#include "ambigg/regime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ambigg/errors.hpp"

namespace ambigg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSearchLimit = 1e6;
} // namespace

double theta_star(double kappa, double xi) {
    if (!(xi > 0.0)) throw std::invalid_argument("theta_star requires xi > 0");
    if (!std::isfinite(kappa)) throw std::invalid_argument("theta_star requires finite kappa");
    const double sq = std::sqrt(xi);
    auto h = [&](double theta) { return theta - std_normal(sq * (kappa - theta)).cdf; };

    double a = 0.0, b = 1.0;
    double fa = h(a);
    if (fa == 0.0) return 0.0;
    if (h(b) == 0.0) return 1.0;
    for (int i = 0; i < 60 && b - a > 1e-16; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = h(m);
        if (fm == 0.0) return m;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    double theta = 0.5 * (a + b);
    for (int i = 0; i < 3; ++i) { // Newton polish; h' = 1 + sq*phi >= 1
        const auto [pdf, cdf] = std_normal(sq * (kappa - theta));
        theta -= (theta - cdf) / (1.0 + sq * pdf);
        theta = std::clamp(theta, 0.0, 1.0);
    }
    return theta;
}

double theta_split_extended(double kappa, double xi) {
    if (kappa == -kInf) return 0.0;
    if (kappa == kInf) return 1.0;
    return theta_star(kappa, xi);
}

namespace {

// Payoff differential against the cutoff profile at kappa, integrated over
// the posterior with precision xi_own; the regime boundary uses xi_others.
double differential_at(const RegimeChangeModel& model, double kappa, double xi_own,
                       double xi_others, double quad_tol) {
    const double split = theta_star(kappa, xi_others);
    const double sq = std::sqrt(xi_own);
    const double lo = kappa - 8.0 / sq;
    const double hi = kappa + 8.0 / sq;
    auto density = [&](double theta) { return sq * std_normal(sq * (theta - kappa)).pdf; };

    double acc = 0.0;
    if (split > lo) {
        const Interval seg{lo, std::min(split, hi)};
        acc += integrate_adaptive([&](double th) { return model.d0(th) * density(th); }, seg,
                                  quad_tol)
                   .value;
    }
    if (split < hi) {
        const Interval seg{std::max(split, lo), hi};
        acc += integrate_adaptive([&](double th) { return model.d1(th) * density(th); }, seg,
                                  quad_tol)
                   .value;
    }
    return acc;
}

double heterogeneous_single_cutoff(const RegimeChangeModel& model, double xi_own,
                                   double xi_others, double quad_tol, double root_tol) {
    auto f = [&](double kappa) {
        return differential_at(model, kappa, xi_own, xi_others, quad_tol);
    };
    double lo = -1.0, hi = 2.0;
    double step = 2.0;
    while (!(f(lo) < 0.0)) {
        lo -= step;
        step *= 2.0;
        if (std::abs(lo) > kSearchLimit) {
            throw NumericalError("regime cutoff: no lower sign change");
        }
    }
    step = 2.0;
    while (!(f(hi) > 0.0)) {
        hi += step;
        step *= 2.0;
        if (std::abs(hi) > kSearchLimit) {
            throw NumericalError("regime cutoff: no upper sign change");
        }
    }
    const RootSet rs = find_roots(f, Interval{lo, hi}, 65, root_tol);
    if (rs.empty()) throw NumericalError("regime cutoff: bracketed root lost");
    if (rs.size() > 1) {
        throw ContractError("regime cutoff: several roots; the single-precision game "
                            "should have a unique equilibrium");
    }
    return rs.roots.front();
}

enum class OptDirection { maximize, minimize };

OptDirection cutoff_direction(const RegimeChangeModel& model) {
    const int anchored = model.safe_action ? *model.safe_action
                         : model.state_independent_action ? *model.state_independent_action
                                                          : -1;
    if (anchored == 0) return OptDirection::maximize;
    if (anchored == 1) return OptDirection::minimize;
    throw UnsupportedError("ambiguous_cutoff requires a safe or state-independent action; "
                           "use the general equilibrium solver instead");
}

} // namespace

double single_prior_cutoff(const RegimeChangeModel& model, double xi, double quad_tol,
                           double root_tol) {
    if (!(xi > 0.0)) throw std::invalid_argument("single_prior_cutoff requires xi > 0");
    const double root = heterogeneous_single_cutoff(model, xi, xi, quad_tol, root_tol);
    if (model.constant_differentials) {
        const double theta_hat = model.d0_value / (model.d0_value - model.d1_value);
        const double closed = theta_hat + std_normal_quantile(theta_hat) / std::sqrt(xi);
        if (std::abs(root - closed) > 1e-8 * (1.0 + std::abs(closed))) {
            throw ContractError("single_prior_cutoff: quadrature root disagrees with the "
                                "constant-differential closed form");
        }
    }
    return root;
}

double ambiguous_cutoff(const RegimeChangeModel& model, const AmbiguitySet& ambiguity) {
    if (ambiguity.kind == AmbiguitySet::Kind::product) {
        return heterogeneous_cutoff(model, ambiguity.xi_own, ambiguity.xi_others);
    }
    const OptDirection dir = cutoff_direction(model);
    const Interval xi_range = ambiguity.xi;
    auto k = [&](double xi) { return single_prior_cutoff(model, xi); };

    if (xi_range.is_singleton()) return k(xi_range.lo);
    if (model.constant_differentials) {
        // k is monotone in the precision, so the optimum sits at an endpoint.
        const double k_lo = k(xi_range.lo);
        const double k_hi = k(xi_range.hi);
        return dir == OptDirection::maximize ? std::max(k_lo, k_hi) : std::min(k_lo, k_hi);
    }
    const double sign = dir == OptDirection::maximize ? -1.0 : 1.0;
    const auto m =
        minimize_on_interval([&](double xi) { return sign * k(xi); }, xi_range, 17, 1e-7);
    return sign * m.min;
}

double regime_change_likelihood(const RegimeChangeModel& model, const AmbiguitySet& ambiguity,
                                double xi_eval) {
    return theta_star(ambiguous_cutoff(model, ambiguity), xi_eval);
}

QualityTrend quality_monotonicity(const RegimeChangeModel& model,
                                  const std::vector<double>& xi_grid) {
    if (xi_grid.size() < 3 || !std::is_sorted(xi_grid.begin(), xi_grid.end())) {
        throw std::invalid_argument("quality_monotonicity requires a sorted grid of >= 3 points");
    }
    constexpr double slack = 1e-9;
    bool any_up = false, any_down = false;
    double prev = theta_star(single_prior_cutoff(model, xi_grid.front()), xi_grid.front());
    for (std::size_t i = 1; i < xi_grid.size(); ++i) {
        const double cur = theta_star(single_prior_cutoff(model, xi_grid[i]), xi_grid[i]);
        if (cur > prev + slack) any_up = true;
        if (cur < prev - slack) any_down = true;
        prev = cur;
    }
    if (any_up && any_down) return QualityTrend::mixed;
    if (any_up) return QualityTrend::increasing;
    if (any_down) return QualityTrend::decreasing;
    return QualityTrend::constant;
}

CrisisOutcome crisis_occurs(const CrisisScenario& scenario) {
    const double lambda = scenario.lambda;
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw std::invalid_argument("crisis_occurs requires lambda in (0,1)");
    }
    if (std::abs(lambda - 0.5) < 1e-12) {
        throw DegenerateCaseError("crisis_occurs: lambda = 1/2 makes the cutoff insensitive "
                                  "to the precision; the predicate excludes it");
    }
    RegimeChangeModel debt;
    debt.name = "debt";
    debt.d0 = [lambda](double) { return -lambda; };
    debt.d1 = [lambda](double) { return 1.0 - lambda; };
    debt.safe_action = 0;
    debt.constant_differentials = true;
    debt.d0_value = -lambda;
    debt.d1_value = 1.0 - lambda;

    CrisisOutcome out;
    out.kappa_star = ambiguous_cutoff(debt, scenario.ambiguity);
    out.theta_bar = lambda < 0.5 ? theta_star(lambda, scenario.xi_true) : 1.0;
    out.occurs = scenario.theta_true <= theta_star(out.kappa_star, scenario.xi_true);
    if (!(lambda < scenario.theta_true && scenario.theta_true < out.theta_bar)) {
        out.note = "theta_true outside (lambda, theta_bar): the outcome does not depend on "
                   "the ambiguity";
    }
    return out;
}

double heterogeneous_cutoff(const RegimeChangeModel& model, Interval xi_own, Interval xi_others) {
    if (!(xi_own.lo > 0.0) || !(xi_others.lo > 0.0)) {
        throw std::invalid_argument("heterogeneous_cutoff requires positive precisions");
    }
    const OptDirection dir = cutoff_direction(model);
    const double sign = dir == OptDirection::maximize ? -1.0 : 1.0;
    auto k = [&](double own, double others) {
        return heterogeneous_single_cutoff(model, own, others, kQuadTol, kRootTol);
    };

    const int g = 9;
    double best = kInf;
    double best_own = xi_own.lo, best_others = xi_others.lo;
    for (int i = 0; i < g; ++i) {
        const double own =
            xi_own.is_singleton() ? xi_own.lo : xi_own.lo + xi_own.length() * i / (g - 1);
        for (int j = 0; j < g; ++j) {
            const double others = xi_others.is_singleton()
                                      ? xi_others.lo
                                      : xi_others.lo + xi_others.length() * j / (g - 1);
            const double v = sign * k(own, others);
            if (v < best) {
                best = v;
                best_own = own;
                best_others = others;
            }
            if (xi_others.is_singleton()) break;
        }
        if (xi_own.is_singleton()) break;
    }
    for (int pass = 0; pass < 2; ++pass) {
        if (!xi_own.is_singleton()) {
            const auto m = minimize_on_interval(
                [&](double own) { return sign * k(own, best_others); }, xi_own, 9, 1e-7);
            if (m.min <= best) {
                best = m.min;
                best_own = m.argmin;
            }
        }
        if (!xi_others.is_singleton()) {
            const auto m = minimize_on_interval(
                [&](double others) { return sign * k(best_own, others); }, xi_others, 9, 1e-7);
            if (m.min <= best) {
                best = m.min;
                best_others = m.argmin;
            }
        }
    }
    return sign * best;
}

double state_independent_value(const RealFn& f, double quad_tol) {
    return integrate_adaptive(f, Interval{0.0, 1.0}, quad_tol).value;
}

} // namespace ambigg
