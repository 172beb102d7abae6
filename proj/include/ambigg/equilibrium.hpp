#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ambigg/interim.hpp"
#include "ambigg/model.hpp"
#include "ambigg/numerics.hpp"

namespace ambigg {

struct CutoffRoot {
    double kappa;
    double residual;
    MeuResult action1; // worst case for acting, evaluated at (kappa, kappa)
    MeuResult action0;
};

/// All switching-equilibrium cutoffs of the game, with the extremal pair
/// designated. Every root lies inside the dominance window (x_lo, x_hi).
struct EquilibriumReport {
    RootSet cutoffs;
    std::vector<CutoffRoot> roots;
    double min_cutoff = 0.0;
    double max_cutoff = 0.0;
    double x_lo = 0.0;
    double x_hi = 0.0;
    std::string note; // records the extremal-bracketing guarantee
};

/// Cutoff bounds surviving each round of removal of strictly dominated
/// strategies, starting from (-inf, +inf).
struct DeletionTrace {
    struct Round {
        double lower;
        double upper;
    };
    std::vector<Round> rounds;
    bool converged = false;
    double tol = 0.0;
};

/// Minimax and maximin of the fictitious-pair cutoff surface.
struct MinimaxReport {
    double kappa_star = 0.0;
    double minmax = 0.0;
    double maxmin = 0.0;
    std::vector<double> xi0_grid;
    std::vector<double> xi1_grid;
    std::vector<std::vector<double>> k_surface; // k_surface[i][j] = k(xi0[i], xi1[j])
};

/// Signal thresholds beyond which one action is interim dominant against
/// every opponent profile: the gap is negative left of the first bound and
/// positive right of the second for every cutoff profile.
std::pair<double, double> dominance_bounds(const PayoffModel& model, const PriorFamily& priors,
                                           const AmbiguitySet& ambiguity);

/// Unique signal at which the worst-case payoff gap against s[kappa]
/// vanishes; -inf/+inf when the gap keeps one sign on the dominance window.
double best_response_cutoff(const PayoffModel& model, const PriorFamily& priors,
                            const AmbiguitySet& ambiguity, double kappa,
                            std::optional<std::pair<double, double>> window = std::nullopt,
                            double tol = kRootTol);

/// Enumerates every root of kappa -> gap(kappa, kappa) on the dominance
/// window. Throws ContractError when no root is found.
EquilibriumReport equilibrium_cutoffs(const PayoffModel& model, const PriorFamily& priors,
                                      const AmbiguitySet& ambiguity,
                                      int scan_points = kKappaScanPoints, double tol = kRootTol);

/// With the action-0 payoff independent of the precision, the maximum
/// equilibrium cutoff of the ambiguous game equals the largest single-prior
/// maximum root. Returns that cutoff and the precision attaining it;
/// cross-checks against equilibrium_cutoffs.
std::pair<double, double> max_cutoff_safe_action(const PayoffModel& model,
                                                 const PriorFamily& priors,
                                                 const AmbiguitySet& ambiguity);

/// Round-by-round best responses from the extreme profiles; the two cutoff
/// sequences squeeze the surviving strategies.
DeletionTrace iterated_deletion(const PayoffModel& model, const PriorFamily& priors,
                                const AmbiguitySet& ambiguity, int max_rounds, double tol = 1e-8);

/// Cutoff of the fictitious game where action 1 is evaluated under xi1 and
/// action 0 under xi0. Throws ContractError when the defining equation has
/// several roots.
double fictitious_cutoff(const PayoffModel& model, const PriorFamily& priors, double xi0,
                         double xi1, int scan_points = kKappaScanPoints, double tol = kRootTol);

/// min-max / max-min of the fictitious cutoff surface over the ambiguity
/// interval; asserts the two orders agree and that the result matches the
/// unique equilibrium cutoff when there is one.
MinimaxReport minimax_cutoff(const PayoffModel& model, const PriorFamily& priors,
                             const AmbiguitySet& ambiguity, double tol = 1e-6);

/// Precision threshold above which every single-precision linear-normal
/// game has a unique equilibrium.
double xi_star(double eta);

/// Derivative of the linear-model equilibrium cutoff (largest root at the
/// lowest precision) with respect to the prior mean, by the implicit
/// function theorem. Throws NumericalError near a tangency.
double cutoff_sensitivity_dy(double eta, double xi_lo, double y);

/// Certifies uniqueness for the linear game with an ex-ante safe action:
/// true when the worst-case payoff stays negative on the bridge interval
/// between the dominance tail and the prior mean.
bool uniqueness_certificate(double eta, double y, Interval xi_range);

/// Symmetric pure strategy in the two-signal introduction game.
struct BinaryStrategyProfile {
    int on_good; // action taken on the favorable signal
    int on_bad;

    bool operator==(const BinaryStrategyProfile&) const = default;
};

/// Brute-force equilibrium enumeration for the binary-state, binary-signal
/// investment game with an ambiguous signal accuracy p in [p_lo, p_hi].
/// Self-contained oracle for the worst-case best-response logic.
std::vector<BinaryStrategyProfile> binary_intro_example(double p_lo, double p_hi,
                                                        double payoff_success, double payoff_fail,
                                                        double payoff_out, double threshold);

} // namespace ambigg
