#pragma once

#include <optional>

#include "ambigg/model.hpp"
#include "ambigg/numerics.hpp"

namespace ambigg {

/// Signal precision pair: the precision behind the player's own posterior
/// and the one governing the opponents' signals. Homogeneous quality uses
/// the single-argument form.
struct Precision {
    double own;
    double others;

    explicit Precision(double common) : own(common), others(common) {}
    Precision(double own_, double others_) : own(own_), others(others_) {}
};

/// One interim evaluation point: action, own signal, opponents' cutoff
/// (may be +/-inf), and the precision index.
struct InterimQuery {
    int action;
    double x;
    double kappa;
    Precision xi;
};

/// Expected payoff to `action` under the linear-normal benchmark when the
/// opponents follow the cutoff strategy at `kappa`. Action 0 is safe (0);
/// action 1 earns theta + l - 1.
double interim_payoff_linear(double eta, double y, double xi, double x, double kappa);

/// Interim payoff by quadrature of u(a, opponent_mass, theta) against the
/// normal posterior, split at the regime discontinuity when the model
/// declares one. `quad_warning`, when given, is set if any quadrature hit
/// its depth limit.
double interim_payoff_general(const PayoffModel& model, const PriorFamily& priors,
                              const InterimQuery& q, double quad_tol = kQuadTol,
                              bool* quad_warning = nullptr);

/// Dispatch: the model's closed form when it has one, quadrature otherwise.
double interim_payoff(const PayoffModel& model, const PriorFamily& priors, const InterimQuery& q);

/// Worst-case interim payoff over the ambiguity set.
struct MeuResult {
    double value = 0.0;
    double argmin_own = 0.0;
    std::optional<double> argmin_others; // product mode only
    bool attained_on_boundary = false;
    bool degenerate = false; // payoff constant in xi (safe action etc.)
    bool tied = false;       // several grid minimizers within tolerance
};

MeuResult meu_payoff(const PayoffModel& model, const PriorFamily& priors,
                     const AmbiguitySet& ambiguity, int action, double x, double kappa,
                     int scan_points = kXiScanPoints, double tol = kMinimizeTol);

/// min over the ambiguity set of the action-1 payoff minus min over the
/// ambiguity set of the action-0 payoff.
double payoff_gap(const PayoffModel& model, const PriorFamily& priors,
                  const AmbiguitySet& ambiguity, double x, double kappa,
                  int scan_points = kXiScanPoints, double tol = kMinimizeTol);

/// Exponential aggregator over a uniform second-order measure on the
/// precision interval. The certainty equivalent tends to the worst case as
/// the aversion coefficient grows.
struct SmoothResult {
    double aggregate;
    double certainty_equivalent;
};

SmoothResult smooth_aggregate(const PayoffModel& model, const PriorFamily& priors,
                              Interval xi_range, double alpha, int action, double x, double kappa);

} // namespace ambigg
