#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ambigg/model.hpp"
#include "ambigg/numerics.hpp"

namespace ambigg {

/// Regime-change payoff structure: the action-1-minus-action-0 differential
/// equals d0(theta) below the regime cutoff and d1(theta) above it, with
/// d0 < 0 < d1, both nondecreasing and bounded.
struct RegimeChangeModel {
    std::string name;
    std::function<double(double)> d0;
    std::function<double(double)> d1;
    std::optional<int> safe_action;
    std::optional<int> state_independent_action;
    bool constant_differentials = false;
    double d0_value = 0.0; // valid when constant_differentials
    double d1_value = 0.0;
};

/// Debt rollover scenario for the crisis predicate.
struct CrisisScenario {
    double lambda;     // collateral value in (0, 1)
    double theta_true; // realized state
    double xi_true;    // true signal precision
    AmbiguitySet ambiguity;
};

/// Unique fixed point in (0, 1) of the regime-change condition: the state at
/// which the mass of players below the cutoff exactly matches the state.
/// Strictly increasing in kappa. Residual <= 1e-12.
double theta_star(double kappa, double xi);

/// theta_star extended to kappa = -inf (0) and +inf (1).
double theta_split_extended(double kappa, double xi);

/// Equilibrium cutoff of the single-precision regime-change game, solved by
/// quadrature of the payoff differential against the posterior. For constant
/// differentials the result is checked against the closed form
/// d0/(d0-d1) + quantile(d0/(d0-d1))/sqrt(xi) within 1e-8.
double single_prior_cutoff(const RegimeChangeModel& model, double xi,
                           double quad_tol = kQuadTol, double root_tol = kRootTol);

/// Worst-case equilibrium cutoff over an ambiguity interval: the maximum of
/// the single-precision cutoffs when action 0 is safe (or state independent),
/// the minimum when action 1 is. Throws UnsupportedError otherwise.
double ambiguous_cutoff(const RegimeChangeModel& model, const AmbiguitySet& ambiguity);

/// Regime-change cutoff attained in the ambiguous game, evaluated at a given
/// precision: theta_star(ambiguous_cutoff, xi_eval).
double regime_change_likelihood(const RegimeChangeModel& model, const AmbiguitySet& ambiguity,
                                double xi_eval);

enum class QualityTrend { increasing, decreasing, constant, mixed };

/// Classifies how theta_star(k(xi), xi) moves across the precision grid.
QualityTrend quality_monotonicity(const RegimeChangeModel& model,
                                  const std::vector<double>& xi_grid);

struct CrisisOutcome {
    bool occurs;
    double theta_bar;   // supremum of attainable regime-change cutoffs
    double kappa_star;  // equilibrium cutoff under the given ambiguity
    std::string note;   // nonempty when the stated range precondition fails
};

/// Debt rollover crisis predicate: the crisis happens exactly when the
/// realized state lies below the regime-change cutoff of the ambiguous game.
/// Throws DegenerateCaseError when lambda = 1/2.
CrisisOutcome crisis_occurs(const CrisisScenario& scenario);

/// Equilibrium cutoff with heterogeneous information quality: the posterior
/// uses the own-signal precision, the opponents' mass uses theirs; the
/// worst case is then taken over the product set.
double heterogeneous_cutoff(const RegimeChangeModel& model, Interval xi_own, Interval xi_others);

/// Value of an action whose payoff depends only on the opponent proportion:
/// the integral of f over [0, 1].
double state_independent_value(const RealFn& f, double quad_tol = kQuadTol);

} // namespace ambigg
