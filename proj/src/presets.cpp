#include "ambigg/presets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ambigg/errors.hpp"

namespace ambigg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// P[theta <= c | x] under the N(x, 1/xi) posterior, c possibly infinite.
double posterior_cdf(double c, double x, double xi) {
    if (c == -kInf) return 0.0;
    if (c == kInf) return 1.0;
    return std_normal(std::sqrt(xi) * (c - x)).cdf;
}
} // namespace

Scenario make_linear(double eta, double y) {
    if (!(eta > 0.0)) throw std::invalid_argument("linear preset requires eta > 0");
    Scenario s;
    s.priors = PriorFamily::normal_prior(eta, y);
    s.model.name = "linear";
    s.model.payoff = [](int a, double l, double theta) {
        return a == 0 ? 0.0 : theta + l - 1.0;
    };
    s.model.safe_action = 0;
    s.model.safe_value = 0.0;
    s.model.theta_bounds = {{-0.5, 1.5}};
    s.model.central_window = Interval{y - 1.0, y + 1.0};
    s.model.closed_form = [eta, y](int a, double x, double kappa, double xi_own,
                                   double xi_others) {
        if (a == 0) return 0.0;
        const double mean = (eta * y + xi_own * x) / (eta + xi_own);
        if (kappa == -kInf) return mean;
        if (kappa == kInf) return mean - 1.0;
        // Opponent's signal given x is normal around the posterior mean with
        // the posterior variance plus the opponents' noise variance.
        const double sd = std::sqrt(1.0 / (eta + xi_own) + 1.0 / xi_others);
        return mean - std_normal((kappa - mean) / sd).cdf;
    };
    return s;
}

Scenario make_debt(double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw std::invalid_argument("debt preset requires lambda in (0,1)");
    }
    Scenario s;
    s.priors = PriorFamily::improper_uniform();
    s.model.name = "debt";
    s.model.payoff = [lambda](int a, double l, double theta) {
        if (a == 0) return lambda;
        return (1.0 - l >= theta) ? 0.0 : 1.0; // project fails when withdrawals reach theta
    };
    s.model.safe_action = 0;
    s.model.safe_value = lambda;
    s.model.theta_bounds = {{-0.5, 1.5}};
    s.model.central_window = Interval{-0.5, 1.5};
    s.model.integrand_split = [](double kappa, double xi_others) -> std::optional<double> {
        return theta_split_extended(kappa, xi_others);
    };
    s.model.closed_form = [lambda](int a, double x, double kappa, double xi_own,
                                   double xi_others) {
        if (a == 0) return lambda;
        const double split = theta_split_extended(kappa, xi_others);
        return 1.0 - posterior_cdf(split, x, xi_own);
    };
    RegimeChangeModel rc;
    rc.name = "debt";
    rc.d0 = [lambda](double) { return -lambda; };
    rc.d1 = [lambda](double) { return 1.0 - lambda; };
    rc.safe_action = 0;
    rc.constant_differentials = true;
    rc.d0_value = -lambda;
    rc.d1_value = 1.0 - lambda;
    s.regime = rc;
    return s;
}

Scenario make_currency(double e_star, double t, double f_slope, double f_intercept) {
    auto shadow = [f_slope, f_intercept](double theta) { return f_intercept + f_slope * theta; };
    if (!(f_slope >= 0.0)) throw std::invalid_argument("currency preset requires f_slope >= 0");
    for (double theta : {-0.5, 1.5}) {
        if (!(t > 0.0 && t < e_star - shadow(theta))) {
            throw std::invalid_argument(
                "currency preset requires 0 < t < e_star - f(theta) on the probed window");
        }
    }
    Scenario s;
    s.priors = PriorFamily::improper_uniform();
    s.model.name = "currency";
    s.model.payoff = [e_star, t, shadow](int a, double l, double theta) {
        if (a == 1) return 0.0; // standing aside is safe
        return (1.0 - l >= theta) ? e_star - shadow(theta) - t : -t;
    };
    s.model.safe_action = 1;
    s.model.safe_value = 0.0;
    s.model.theta_bounds = {{-0.5, 1.5}};
    s.model.central_window = Interval{-0.5, 1.5};
    s.model.integrand_split = [](double kappa, double xi_others) -> std::optional<double> {
        return theta_split_extended(kappa, xi_others);
    };
    s.model.closed_form = [e_star, t, f_slope, f_intercept](int a, double x, double kappa,
                                                            double xi_own, double xi_others) {
        if (a == 1) return 0.0;
        const double split = theta_split_extended(kappa, xi_others);
        if (split == -kInf) return -t;
        const double z = std::sqrt(xi_own) * (split - x);
        const auto [pdf, cdf] = std_normal(z);
        // E[theta 1{theta <= split} | x] = x Phi(z) - phi(z)/sqrt(xi)
        const double truncated_mean = x * cdf - pdf / std::sqrt(xi_own);
        return (e_star - f_intercept) * cdf - f_slope * truncated_mean - t;
    };
    RegimeChangeModel rc;
    rc.name = "currency";
    rc.d0 = [e_star, t, shadow](double theta) { return -(e_star - shadow(theta) - t); };
    rc.d1 = [t](double) { return t; };
    rc.safe_action = 1;
    rc.constant_differentials = (f_slope == 0.0);
    rc.d0_value = -(e_star - f_intercept - t);
    rc.d1_value = t;
    s.regime = rc;
    return s;
}

double StepTable::operator()(double l) const {
    for (const auto& [cut, value] : steps) {
        if (l <= cut) return value;
    }
    return steps.back().second;
}

Scenario make_bankrun(StepTable f) {
    if (f.steps.empty()) throw std::invalid_argument("bankrun preset requires a step table");
    for (std::size_t i = 0; i + 1 < f.steps.size(); ++i) {
        if (!(f.steps[i].first < f.steps[i + 1].first)) {
            throw std::invalid_argument("bankrun step cuts must be strictly increasing");
        }
    }
    if (f.steps.back().first < 1.0) {
        throw std::invalid_argument("bankrun step table must cover l = 1");
    }
    Scenario s;
    s.priors = PriorFamily::improper_uniform();
    s.model.name = "bankrun";
    s.model.payoff = [f](int a, double l, double theta) {
        if (a == 0) return f(l);
        return (1.0 - l >= theta) ? 0.0 : 1.0;
    };
    s.model.state_independent_action = 0;
    s.model.theta_bounds = {{-0.5, 1.5}};
    s.model.central_window = Interval{-0.5, 1.5};
    s.model.integrand_split = [](double kappa, double xi_others) -> std::optional<double> {
        return theta_split_extended(kappa, xi_others);
    };
    s.model.closed_form = [f](int a, double x, double kappa, double xi_own, double xi_others) {
        if (a == 1) {
            const double split = theta_split_extended(kappa, xi_others);
            return 1.0 - posterior_cdf(split, x, xi_own);
        }
        if (kappa == -kInf) return f(1.0);
        if (kappa == kInf) return f(0.0);
        // The opponent mass l(theta) is increasing, so each step of f maps to
        // a posterior slab between consecutive mass thresholds.
        const double sq = std::sqrt(xi_others);
        auto theta_at_mass = [&](double c) {
            if (c <= 0.0) return -kInf;
            if (c >= 1.0) return kInf;
            return kappa - std_normal_quantile(1.0 - c) / sq;
        };
        double value = 0.0;
        double prev_cdf = 0.0;
        for (const auto& [cut, v] : f.steps) {
            const double cdf = posterior_cdf(theta_at_mass(cut), x, xi_own);
            value += v * (cdf - prev_cdf);
            prev_cdf = cdf;
        }
        return value;
    };
    return s;
}

namespace {

double piecewise_eval(const CustomActionSpec& spec, double theta) {
    if (spec.theta_knots.empty()) return spec.theta_slope * theta;
    const auto& ks = spec.theta_knots;
    if (theta <= ks.front().first) return ks.front().second;
    if (theta >= ks.back().first) return ks.back().second;
    for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
        if (theta <= ks[i + 1].first) {
            const double w = (theta - ks[i].first) / (ks[i + 1].first - ks[i].first);
            return ks[i].second + w * (ks[i + 1].second - ks[i].second);
        }
    }
    return ks.back().second;
}

bool theta_constant(const CustomActionSpec& spec) {
    if (!spec.theta_knots.empty()) {
        for (const auto& [theta, v] : spec.theta_knots) {
            (void)theta;
            if (v != spec.theta_knots.front().second) return false;
        }
        return true;
    }
    return spec.theta_slope == 0.0;
}

} // namespace

Scenario make_custom(const CustomActionSpec& action0, const CustomActionSpec& action1,
                     const PriorFamily& priors,
                     std::optional<std::pair<double, double>> theta_bounds) {
    for (const auto* spec : {&action0, &action1}) {
        for (std::size_t i = 0; i + 1 < spec->theta_knots.size(); ++i) {
            if (!(spec->theta_knots[i].first < spec->theta_knots[i + 1].first)) {
                throw std::invalid_argument("custom model knots must be strictly increasing");
            }
        }
    }
    Scenario s;
    s.priors = priors;
    s.model.name = "custom";
    s.model.payoff = [action0, action1](int a, double l, double theta) {
        const CustomActionSpec& spec = (a == 0) ? action0 : action1;
        return spec.intercept + spec.l_slope * l + piecewise_eval(spec, theta);
    };
    for (int a : {0, 1}) {
        const CustomActionSpec& spec = (a == 0) ? action0 : action1;
        if (spec.l_slope == 0.0 && theta_constant(spec)) {
            s.model.safe_action = a;
            s.model.safe_value = spec.intercept + piecewise_eval(spec, 0.0);
            break;
        }
    }
    if (!s.model.safe_action) {
        for (int a : {0, 1}) {
            const CustomActionSpec& spec = (a == 0) ? action0 : action1;
            if (theta_constant(spec)) {
                s.model.state_independent_action = a;
                break;
            }
        }
    }
    s.model.theta_bounds = theta_bounds;
    if (priors.kind == PriorFamily::Kind::normal) {
        s.model.central_window = Interval{priors.y - 1.0, priors.y + 1.0};
    } else {
        s.model.central_window = Interval{-1.0, 2.0};
    }
    return s;
}

} // namespace ambigg
