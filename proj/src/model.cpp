#include "ambigg/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ambigg/errors.hpp"
#include "ambigg/interim.hpp"

namespace ambigg {

namespace {
constexpr double kMonotonicitySlack = 1e-12;
}

NoiseFamily NoiseFamily::normal() {
    NoiseFamily n;
    n.kind = Kind::normal;
    n.cdf = [](double xi, double e) { return std_normal(std::sqrt(xi) * e).cdf; };
    return n;
}

PriorFamily PriorFamily::normal_prior(double eta, double y) {
    if (!(eta > 0.0)) throw std::invalid_argument("normal prior requires eta > 0");
    PriorFamily p;
    p.kind = Kind::normal;
    p.eta = eta;
    p.y = y;
    return p;
}

PriorFamily PriorFamily::improper_uniform() {
    PriorFamily p;
    p.kind = Kind::improper_uniform;
    return p;
}

AmbiguitySet AmbiguitySet::interval(double lo, double hi) {
    if (!(lo > 0.0) || lo > hi) {
        throw std::invalid_argument("ambiguity interval requires 0 < lo <= hi");
    }
    AmbiguitySet s;
    s.kind = Kind::interval;
    s.xi = Interval{lo, hi};
    return s;
}

AmbiguitySet AmbiguitySet::singleton(double xi) { return interval(xi, xi); }

AmbiguitySet AmbiguitySet::product(Interval own, Interval others) {
    if (!(own.lo > 0.0) || !(others.lo > 0.0)) {
        throw std::invalid_argument("ambiguity product requires positive precisions");
    }
    AmbiguitySet s;
    s.kind = Kind::product;
    s.xi_own = own;
    s.xi_others = others;
    return s;
}

bool AmbiguitySet::is_singleton() const {
    return kind == Kind::interval ? xi.is_singleton()
                                  : xi_own.is_singleton() && xi_others.is_singleton();
}

PosteriorParams posterior_params(const PriorFamily& priors, double xi, double x) {
    if (!(xi > 0.0)) throw std::invalid_argument("posterior_params requires xi > 0");
    if (priors.kind == PriorFamily::Kind::improper_uniform) {
        return {x, xi};
    }
    if (priors.noise.kind != NoiseFamily::Kind::normal) {
        throw UnsupportedError(
            "normal prior with non-normal noise has no conjugate posterior; "
            "use the quadrature path");
    }
    const double prec = priors.eta + xi;
    return {(priors.eta * priors.y + xi * x) / prec, prec};
}

double opponent_mass(const PriorFamily& priors, double xi, double kappa, double theta) {
    if (kappa == -std::numeric_limits<double>::infinity()) return 1.0;
    if (kappa == std::numeric_limits<double>::infinity()) return 0.0;
    return 1.0 - priors.noise.cdf(xi, kappa - theta);
}

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = (n == 1) ? lo : lo + (hi - lo) * i / (n - 1);
    }
    return xs;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

} // namespace

bool ValidationReport::all_passed() const {
    for (const auto& c : checks) {
        if (!c.passed) return false;
    }
    return true;
}

std::string ValidationReport::first_failure() const {
    for (const auto& c : checks) {
        if (!c.passed) return c.id + ": " + c.detail;
    }
    return {};
}

ValidationReport validate_assumptions(const PayoffModel& model, const PriorFamily& priors,
                                      const AmbiguitySet& ambiguity, const SamplingGrid& grid) {
    ValidationReport report;
    const auto ls = linspace(0.0, 1.0, grid.l_points);
    const auto thetas = linspace(grid.theta_window.lo, grid.theta_window.hi, grid.theta_points);
    const Interval xi_range =
        ambiguity.kind == AmbiguitySet::Kind::interval ? ambiguity.xi : ambiguity.xi_own;
    const auto xis = linspace(xi_range.lo, xi_range.hi, grid.xi_points);

    // A1: u(1,.,theta) nondecreasing and u(0,.,theta) nonincreasing in l.
    {
        bool ok = true;
        std::string detail = "sampled monotonicity in opponent mass holds";
        for (double theta : thetas) {
            for (std::size_t i = 0; ok && i + 1 < ls.size(); ++i) {
                const double up = model.payoff(1, ls[i + 1], theta) - model.payoff(1, ls[i], theta);
                const double dn = model.payoff(0, ls[i + 1], theta) - model.payoff(0, ls[i], theta);
                if (up < -kMonotonicitySlack) {
                    ok = false;
                    detail = "u(1,l," + fmt(theta) + ") decreases near l=" + fmt(ls[i]);
                }
                if (ok && dn > kMonotonicitySlack) {
                    ok = false;
                    detail = "u(0,l," + fmt(theta) + ") increases near l=" + fmt(ls[i]);
                }
            }
            if (!ok) break;
        }
        report.checks.push_back({"A1", ok, detail});
    }

    // A2: u(1,l,.) nondecreasing and u(0,l,.) nonincreasing in theta.
    {
        bool ok = true;
        std::string detail = "sampled monotonicity in the state holds";
        for (double l : ls) {
            for (std::size_t i = 0; ok && i + 1 < thetas.size(); ++i) {
                const double up = model.payoff(1, l, thetas[i + 1]) - model.payoff(1, l, thetas[i]);
                const double dn = model.payoff(0, l, thetas[i + 1]) - model.payoff(0, l, thetas[i]);
                if (up < -kMonotonicitySlack) {
                    ok = false;
                    detail = "u(1," + fmt(l) + ",theta) decreases near theta=" + fmt(thetas[i]);
                }
                if (ok && dn > kMonotonicitySlack) {
                    ok = false;
                    detail = "u(0," + fmt(l) + ",theta) increases near theta=" + fmt(thetas[i]);
                }
            }
            if (!ok) break;
        }
        report.checks.push_back({"A2", ok, detail});
    }

    // A3: posterior cdf under the higher signal lies below the one under the
    // lower signal at every sampled state (first-order stochastic dominance).
    {
        bool ok = true;
        std::string detail = "sampled posterior ordering holds";
        try {
            const auto x_lo = linspace(model.central_window.lo, model.central_window.hi,
                                       grid.signal_pairs);
            for (double xi : xis) {
                for (std::size_t i = 0; ok && i + 1 < x_lo.size(); ++i) {
                    const auto p_hi = posterior_params(priors, xi, x_lo[i + 1]);
                    const auto p_lo = posterior_params(priors, xi, x_lo[i]);
                    for (double theta : thetas) {
                        const double cdf_hi =
                            std_normal((theta - p_hi.mean) * std::sqrt(p_hi.precision)).cdf;
                        const double cdf_lo =
                            std_normal((theta - p_lo.mean) * std::sqrt(p_lo.precision)).cdf;
                        if (cdf_hi > cdf_lo + kMonotonicitySlack) {
                            ok = false;
                            detail = "posterior cdf ordering fails at theta=" + fmt(theta);
                            break;
                        }
                    }
                }
                if (!ok) break;
            }
        } catch (const UnsupportedError&) {
            ok = false;
            detail = "no conjugate posterior available for this prior/noise pair";
        }
        report.checks.push_back({"A3", ok, detail});
    }

    // A4: interim payoffs evaluate finite at sampled (x, kappa, xi),
    // including extended cutoffs. Sampled finiteness only, never a proof.
    {
        bool ok = true;
        std::string detail = "sampled finiteness only; unbounded payoffs are not certified";
        const double inf = std::numeric_limits<double>::infinity();
        const std::vector<double> kappas = {-inf, model.central_window.lo,
                                            model.central_window.midpoint(),
                                            model.central_window.hi, inf};
        try {
            for (double xi : xis) {
                for (double kappa : kappas) {
                    for (int a : {0, 1}) {
                        const InterimQuery q{a, model.central_window.midpoint(), kappa,
                                             Precision(xi)};
                        const double v = interim_payoff_general(model, priors, q);
                        if (!std::isfinite(v)) {
                            ok = false;
                            detail = "non-finite interim payoff at kappa=" + fmt(kappa);
                        }
                    }
                }
            }
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        report.checks.push_back({"A4", ok, detail});
    }

    // A5: action 0 dominant for very low signals against everyone acting,
    // action 1 dominant for very high signals against no one acting.
    {
        bool ok = true;
        std::string detail = "sampled limit dominance holds";
        try {
            double theta_lo, theta_hi;
            if (model.theta_bounds) {
                theta_lo = model.theta_bounds->first;
                theta_hi = model.theta_bounds->second;
            } else {
                theta_lo = model.central_window.lo;
                theta_hi = model.central_window.hi;
            }
            for (double xi : xis) {
                const double sd = 1.0 / std::sqrt(posterior_params(priors, xi, 0.0).precision);
                const double x_low = theta_lo - 10.0 * sd - std::abs(theta_lo);
                const double x_high = theta_hi + 10.0 * sd + std::abs(theta_hi);
                const double inf = std::numeric_limits<double>::infinity();
                const double low_gap =
                    interim_payoff_general(model, priors, {1, x_low, -inf, Precision(xi)}) -
                    interim_payoff_general(model, priors, {0, x_low, -inf, Precision(xi)});
                const double high_gap =
                    interim_payoff_general(model, priors, {1, x_high, inf, Precision(xi)}) -
                    interim_payoff_general(model, priors, {0, x_high, inf, Precision(xi)});
                if (!(low_gap < 0.0)) {
                    ok = false;
                    detail = "action 1 not dominated at x=" + fmt(x_low);
                }
                if (ok && !(high_gap > 0.0)) {
                    ok = false;
                    detail = "action 1 not dominant at x=" + fmt(x_high);
                }
            }
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        report.checks.push_back({"A5", ok, detail});
    }

    return report;
}

} // namespace ambigg
