#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ambigg/numerics.hpp"

namespace ambigg {

/// Symmetric, unimodal, zero-mean noise with variance 1/xi.
/// `cdf(xi, e)` evaluates the distribution function at e.
struct NoiseFamily {
    enum class Kind { normal, custom };
    Kind kind = Kind::normal;
    std::function<double(double xi, double e)> cdf;

    static NoiseFamily normal();
};

/// State prior indexed by the noise precision xi.
struct PriorFamily {
    enum class Kind { normal, improper_uniform };
    Kind kind = Kind::improper_uniform;
    double eta = 0.0; // prior precision (normal kind)
    double y = 0.0;   // prior mean (normal kind)
    NoiseFamily noise = NoiseFamily::normal();

    static PriorFamily normal_prior(double eta, double y);
    static PriorFamily improper_uniform();
};

/// Compact index set of precisions: an interval, or a product of two
/// intervals when own-signal and opponents'-signal quality differ.
struct AmbiguitySet {
    enum class Kind { interval, product };
    Kind kind = Kind::interval;
    Interval xi{1.0, 1.0};        // interval mode
    Interval xi_own{1.0, 1.0};    // product mode: own-signal precision
    Interval xi_others{1.0, 1.0}; // product mode: opponents' precision

    static AmbiguitySet interval(double lo, double hi);
    static AmbiguitySet singleton(double xi);
    static AmbiguitySet product(Interval own, Interval others);

    bool is_singleton() const;
};

/// Monotone strategy: action 1 exactly when the signal exceeds the cutoff.
/// The cutoff may be -inf (always act) or +inf (never act).
struct SwitchingStrategy {
    double cutoff = 0.0;
    int operator()(double x) const { return x > cutoff ? 1 : 0; }
};

/// Binary-action payoff u(a, l, theta) with the metadata the solver layers
/// rely on. `l` is the proportion of opponents playing action 1.
struct PayoffModel {
    std::string name;
    std::function<double(int a, double l, double theta)> payoff;

    std::optional<int> safe_action;              // payoff constant in (l, theta)
    double safe_value = 0.0;
    std::optional<int> state_independent_action; // payoff constant in theta only

    std::optional<std::pair<double, double>> theta_bounds; // dominance probes
    Interval central_window{-1.0, 2.0};                    // seed for outward search

    /// Discontinuity of theta -> u(a, l(theta), theta) along an opponents'
    /// cutoff profile, if any (regime-change models jump at theta*).
    std::function<std::optional<double>(double kappa, double xi_others)> integrand_split;

    /// Optional analytic interim payoff, used as a fast path by the
    /// equilibrium layers. Tests verify it against the quadrature route.
    std::function<double(int a, double x, double kappa, double xi_own, double xi_others)>
        closed_form;
};

struct PosteriorParams {
    double mean;
    double precision;
};

/// Parameters of the normal posterior of theta given signal x under
/// precision xi. Throws UnsupportedError for non-normal noise with a
/// normal prior (that combination needs the quadrature path).
PosteriorParams posterior_params(const PriorFamily& priors, double xi, double x);

/// Proportion of opponents taking action 1 at state theta when they follow
/// the switching strategy with the given cutoff (may be +/-inf).
double opponent_mass(const PriorFamily& priors, double xi, double kappa, double theta);

/// Sampling resolution for validate_assumptions.
struct SamplingGrid {
    int l_points = 21;
    int theta_points = 25;
    Interval theta_window{-2.0, 3.0};
    int xi_points = 5;
    int signal_pairs = 8;
};

struct ValidationReport {
    struct Check {
        std::string id;     // "A1".."A5"
        bool passed;
        std::string detail; // first failure, or a note
    };
    std::vector<Check> checks;

    bool all_passed() const;
    std::string first_failure() const;
};

/// Samples the maintained assumptions (payoff monotonicity, stochastic
/// dominance, continuity/finiteness, limit dominance) and reports
/// pass/fail per assumption. Failures never throw; they are reported.
ValidationReport validate_assumptions(const PayoffModel& model, const PriorFamily& priors,
                                      const AmbiguitySet& ambiguity,
                                      const SamplingGrid& grid = SamplingGrid{});

} // namespace ambigg
