#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ambigg/model.hpp"
#include "ambigg/regime.hpp"

namespace ambigg {

/// A solvable game: payoffs plus the prior family they are played under.
/// Regime-change presets also carry their differential form.
struct Scenario {
    PayoffModel model;
    PriorFamily priors;
    std::optional<RegimeChangeModel> regime;
};

/// Linear-normal benchmark: action 1 pays theta + l - 1, action 0 is safe
/// at 0; the state is normal with mean y and precision eta.
Scenario make_linear(double eta, double y);

/// Creditor coordination: action 1 (roll over) pays 1 when the project
/// survives, 0 otherwise; action 0 (exit) pays the collateral lambda.
Scenario make_debt(double lambda);

/// Speculative attack: action 1 (stand aside) is safe at 0; action 0
/// (attack) nets e_star - f(theta) - t on success and -t otherwise, with
/// shadow rate f(theta) = f_intercept + f_slope * theta.
Scenario make_currency(double e_star, double t, double f_slope, double f_intercept);

/// Step function on [0, 1]: value(i) applies for l <= cut(i); cuts are
/// strictly increasing and end at 1.
struct StepTable {
    std::vector<std::pair<double, double>> steps; // (cut, value)
    double operator()(double l) const;
};

/// Early-withdrawal game: action 0 pays f(l) (state independent), action 1
/// pays 1 when the bank survives the withdrawal wave, 0 otherwise.
Scenario make_bankrun(StepTable f);

/// One action of a user-supplied model: intercept + l_slope * l + g(theta),
/// where g is either theta_slope * theta or a piecewise-linear profile
/// through `theta_knots` (constant beyond the outer knots).
struct CustomActionSpec {
    double intercept = 0.0;
    double l_slope = 0.0;
    double theta_slope = 0.0;
    std::vector<std::pair<double, double>> theta_knots;
};

Scenario make_custom(const CustomActionSpec& action0, const CustomActionSpec& action1,
                     const PriorFamily& priors,
                     std::optional<std::pair<double, double>> theta_bounds = std::nullopt);

} // namespace ambigg
