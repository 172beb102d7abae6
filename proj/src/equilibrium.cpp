#include "ambigg/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "ambigg/errors.hpp"
#include "ambigg/presets.hpp"

namespace ambigg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSearchLimit = 1e6;
constexpr long double kPi = 3.14159265358979323846264338327950288L;

double gap_at(const PayoffModel& model, const PriorFamily& priors, const AmbiguitySet& ambiguity,
              double x, double kappa) {
    return payoff_gap(model, priors, ambiguity, x, kappa);
}

} // namespace

std::pair<double, double> dominance_bounds(const PayoffModel& model, const PriorFamily& priors,
                                           const AmbiguitySet& ambiguity) {
    const Interval c = model.central_window;
    const double step0 = std::max(1.0, c.length());

    // The gap falls in the opponents' cutoff, so the extremal profiles
    // s[-inf] and s[+inf] witness dominance for every profile in between.
    double x_lo = c.lo;
    double step = step0;
    while (!(gap_at(model, priors, ambiguity, x_lo, -kInf) < 0.0)) {
        x_lo -= step;
        step *= 2.0;
        if (std::abs(x_lo) > kSearchLimit) {
            throw ContractError("dominance_bounds: no lower dominance region found; "
                                "the model violates limit dominance");
        }
    }
    double x_hi = c.hi;
    step = step0;
    while (!(gap_at(model, priors, ambiguity, x_hi, kInf) > 0.0)) {
        x_hi += step;
        step *= 2.0;
        if (std::abs(x_hi) > kSearchLimit) {
            throw ContractError("dominance_bounds: no upper dominance region found; "
                                "the model violates limit dominance");
        }
    }
    return {x_lo, x_hi};
}

double best_response_cutoff(const PayoffModel& model, const PriorFamily& priors,
                            const AmbiguitySet& ambiguity, double kappa,
                            std::optional<std::pair<double, double>> window, double tol) {
    const auto [x_lo, x_hi] = window ? *window : dominance_bounds(model, priors, ambiguity);
    auto g = [&](double x) { return gap_at(model, priors, ambiguity, x, kappa); };
    double a = x_lo, b = x_hi;
    double fa = g(a), fb = g(b);
    if (fa >= 0.0) return -kInf; // acting already preferred at the lower edge
    if (fb <= 0.0) return kInf;

    // The gap is increasing in x, so the bracketed root is unique.
    double best_x = a;
    double best_f = std::abs(fa);
    for (int it = 0; it < 200; ++it) {
        double x = 0.5 * (a + b);
        if (fb != fa) {
            const double s = b - fb * (b - a) / (fb - fa);
            if (s > a && s < b) x = s;
        }
        const double fx = g(x);
        if (std::abs(fx) < best_f) {
            best_f = std::abs(fx);
            best_x = x;
        }
        if (std::abs(fx) <= tol) return x;
        if (fx < 0.0) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if (b - a <= std::numeric_limits<double>::epsilon() * (1.0 + std::abs(a) + std::abs(b))) {
            break;
        }
    }
    return best_x;
}

EquilibriumReport equilibrium_cutoffs(const PayoffModel& model, const PriorFamily& priors,
                                      const AmbiguitySet& ambiguity, int scan_points, double tol) {
    const auto [x_lo, x_hi] = dominance_bounds(model, priors, ambiguity);
    auto g = [&](double kappa) { return gap_at(model, priors, ambiguity, kappa, kappa); };

    Interval window{x_lo - 1.0, x_hi + 1.0};
    RootSet roots;
    for (int attempt = 0;; ++attempt) {
        roots = find_roots(g, window, scan_points, tol);
        const double edge = window.length() / (scan_points - 1);
        const bool near_edge =
            !roots.empty() && (roots.roots.front() < window.lo + edge ||
                               roots.roots.back() > window.hi - edge);
        if (!near_edge || attempt >= 3) break;
        const double mid = window.midpoint();
        const double half = window.length(); // doubled width
        window = Interval{mid - half, mid + half};
    }
    if (roots.empty()) {
        throw ContractError("equilibrium_cutoffs: no root of the worst-case gap on the "
                            "dominance window; existence requires at least one");
    }

    EquilibriumReport report;
    report.cutoffs = roots;
    report.x_lo = x_lo;
    report.x_hi = x_hi;
    for (double r : roots.roots) {
        CutoffRoot info;
        info.kappa = r;
        info.residual = std::abs(g(r));
        info.action1 = meu_payoff(model, priors, ambiguity, 1, r, r);
        info.action0 = meu_payoff(model, priors, ambiguity, 0, r, r);
        report.roots.push_back(std::move(info));
    }
    report.min_cutoff = roots.roots.front();
    report.max_cutoff = roots.roots.back();
    report.note = "every strategy surviving iterated deletion lies between the switching "
                  "strategies at the extremal cutoffs";
    return report;
}

std::pair<double, double> max_cutoff_safe_action(const PayoffModel& model,
                                                 const PriorFamily& priors,
                                                 const AmbiguitySet& ambiguity) {
    if (ambiguity.kind != AmbiguitySet::Kind::interval) {
        throw UnsupportedError("max_cutoff_safe_action expects an interval ambiguity set");
    }
    const Interval xi_range = ambiguity.xi;

    // Precondition: the action-0 interim payoff on the diagonal must not
    // depend on the precision.
    {
        double lo = kInf, hi = -kInf;
        for (double kappa : {model.central_window.lo, model.central_window.midpoint(),
                             model.central_window.hi}) {
            for (double xi : {xi_range.lo, xi_range.midpoint(), xi_range.hi}) {
                const double v = interim_payoff(model, priors, {0, kappa, kappa, Precision(xi)});
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi - lo > 1e-9 * (1.0 + std::abs(hi))) {
                throw ContractError("max_cutoff_safe_action: action-0 payoff varies with the "
                                    "precision; the reduction does not apply");
            }
            lo = kInf;
            hi = -kInf;
        }
    }

    auto max_root_at = [&](double xi) {
        const AmbiguitySet single = AmbiguitySet::singleton(xi);
        const auto [lo, hi] = dominance_bounds(model, priors, single);
        auto h = [&](double kappa) { return gap_at(model, priors, single, kappa, kappa); };
        const RootSet rs = find_roots(h, Interval{lo - 1.0, hi + 1.0}, kKappaScanPoints, kRootTol);
        if (rs.empty()) {
            throw ContractError("max_cutoff_safe_action: single-precision game has no root");
        }
        return rs.roots.back();
    };

    const int grid_n = 33;
    double best_xi = xi_range.lo;
    double best_k = -kInf;
    std::vector<double> xis(grid_n), ks(grid_n);
    for (int i = 0; i < grid_n; ++i) {
        xis[i] = xi_range.is_singleton()
                     ? xi_range.lo
                     : xi_range.lo + xi_range.length() * i / (grid_n - 1);
        ks[i] = max_root_at(xis[i]);
        if (ks[i] > best_k) {
            best_k = ks[i];
            best_xi = xis[i];
        }
        if (xi_range.is_singleton()) break;
    }
    if (!xi_range.is_singleton()) {
        const int idx = int(std::find(xis.begin(), xis.end(), best_xi) - xis.begin());
        const double lo = xis[std::max(0, idx - 1)];
        const double hi = xis[std::min(grid_n - 1, idx + 1)];
        const auto refined = minimize_on_interval([&](double xi) { return -max_root_at(xi); },
                                                  Interval{lo, hi}, 9, 1e-9);
        if (-refined.min > best_k) {
            best_k = -refined.min;
            best_xi = refined.argmin;
        }
    }

    const EquilibriumReport full = equilibrium_cutoffs(model, priors, ambiguity);
    if (std::abs(full.max_cutoff - best_k) > 1e-6 * (1.0 + std::abs(best_k))) {
        throw ContractError("max_cutoff_safe_action: per-precision maximum disagrees with the "
                            "ambiguous game's maximum cutoff");
    }
    return {best_k, best_xi};
}

namespace {

struct GapKey {
    long long x;
    long long kappa;
    bool operator==(const GapKey&) const = default;
};

struct GapKeyHash {
    std::size_t operator()(const GapKey& k) const {
        const std::size_t h1 = std::hash<long long>{}(k.x);
        const std::size_t h2 = std::hash<long long>{}(k.kappa);
        return h1 ^ (h2 * 0x9e3779b97f4a7c15ULL);
    }
};

long long quantize(double v) {
    if (v == kInf) return std::numeric_limits<long long>::max();
    if (v == -kInf) return std::numeric_limits<long long>::min();
    return llround(v * 1e12);
}

} // namespace

DeletionTrace iterated_deletion(const PayoffModel& model, const PriorFamily& priors,
                                const AmbiguitySet& ambiguity, int max_rounds, double tol) {
    if (max_rounds < 1) throw std::invalid_argument("iterated_deletion requires max_rounds >= 1");
    const auto window = dominance_bounds(model, priors, ambiguity);

    // Rounds revisit overlapping (x, kappa) pairs; memoize the gap.
    std::unordered_map<GapKey, double, GapKeyHash> cache;
    auto cached_gap = [&](double x, double kappa) {
        const GapKey key{quantize(x), quantize(kappa)};
        if (auto it = cache.find(key); it != cache.end()) return it->second;
        const double v = gap_at(model, priors, ambiguity, x, kappa);
        cache.emplace(key, v);
        return v;
    };
    auto respond = [&](double kappa) {
        double a = window.first, b = window.second;
        double fa = cached_gap(a, kappa), fb = cached_gap(b, kappa);
        if (fa >= 0.0) return -kInf;
        if (fb <= 0.0) return kInf;
        double best_x = a;
        double best_f = std::abs(fa);
        for (int it = 0; it < 200; ++it) {
            double x = 0.5 * (a + b);
            if (fb != fa) {
                const double s = b - fb * (b - a) / (fb - fa);
                if (s > a && s < b) x = s;
            }
            const double fx = cached_gap(x, kappa);
            if (std::abs(fx) < best_f) {
                best_f = std::abs(fx);
                best_x = x;
            }
            if (std::abs(fx) <= kRootTol) return x;
            if (fx < 0.0) {
                a = x;
                fa = fx;
            } else {
                b = x;
                fb = fx;
            }
            if (b - a <=
                std::numeric_limits<double>::epsilon() * (1.0 + std::abs(a) + std::abs(b))) {
                break;
            }
        }
        return best_x;
    };

    DeletionTrace trace;
    trace.tol = tol;
    trace.rounds.push_back({-kInf, kInf});
    for (int n = 0; n < max_rounds; ++n) {
        const auto prev = trace.rounds.back();
        const double lower = respond(prev.lower);
        const double upper = respond(prev.upper);
        if (lower < prev.lower - 1e-12 || upper > prev.upper + 1e-12 || lower > upper + 1e-12) {
            throw NumericalError("iterated_deletion: non-monotone bound sequence");
        }
        trace.rounds.push_back({lower, upper});
        const double d_lower = std::isfinite(prev.lower) ? std::abs(lower - prev.lower) : kInf;
        const double d_upper = std::isfinite(prev.upper) ? std::abs(upper - prev.upper) : kInf;
        if (d_lower < tol && d_upper < tol) {
            trace.converged = true;
            break;
        }
    }
    return trace;
}

double fictitious_cutoff(const PayoffModel& model, const PriorFamily& priors, double xi0,
                         double xi1, int scan_points, double tol) {
    auto diff = [&](double x, double kappa) {
        return interim_payoff(model, priors, {1, x, kappa, Precision(xi1)}) -
               interim_payoff(model, priors, {0, x, kappa, Precision(xi0)});
    };

    const Interval c = model.central_window;
    double x_lo = c.lo;
    double step = std::max(1.0, c.length());
    while (!(diff(x_lo, -kInf) < 0.0)) {
        x_lo -= step;
        step *= 2.0;
        if (std::abs(x_lo) > kSearchLimit) {
            throw NumericalError("fictitious_cutoff: no lower dominance region");
        }
    }
    double x_hi = c.hi;
    step = std::max(1.0, c.length());
    while (!(diff(x_hi, kInf) > 0.0)) {
        x_hi += step;
        step *= 2.0;
        if (std::abs(x_hi) > kSearchLimit) {
            throw NumericalError("fictitious_cutoff: no upper dominance region");
        }
    }

    auto f = [&](double kappa) { return diff(kappa, kappa); };
    const RootSet rs = find_roots(f, Interval{x_lo - 1.0, x_hi + 1.0}, scan_points, tol);
    if (rs.empty()) {
        throw NumericalError("fictitious_cutoff: no root on the dominance window");
    }
    if (rs.size() > 1) {
        throw ContractError("fictitious_cutoff: several roots; the fictitious game is not "
                            "uniquely solvable for this precision pair");
    }
    return rs.roots.front();
}

MinimaxReport minimax_cutoff(const PayoffModel& model, const PriorFamily& priors,
                             const AmbiguitySet& ambiguity, double tol) {
    if (ambiguity.kind != AmbiguitySet::Kind::interval) {
        throw UnsupportedError("minimax_cutoff expects an interval ambiguity set");
    }
    const Interval xi_range = ambiguity.xi;
    auto k = [&](double xi0, double xi1) {
        return fictitious_cutoff(model, priors, xi0, xi1, 129);
    };

    auto solve_orders = [&](int scan) {
        const double opt_tol = 1e-8;
        auto inner_max = [&](double xi0) {
            return -minimize_on_interval([&](double xi1) { return -k(xi0, xi1); }, xi_range, scan,
                                         opt_tol)
                        .min;
        };
        auto inner_min = [&](double xi1) {
            return minimize_on_interval([&](double xi0) { return k(xi0, xi1); }, xi_range, scan,
                                        opt_tol)
                .min;
        };
        const double minmax =
            minimize_on_interval(inner_max, xi_range, scan, opt_tol).min;
        const double maxmin =
            -minimize_on_interval([&](double xi1) { return -inner_min(xi1); }, xi_range, scan,
                                  opt_tol)
                 .min;
        return std::pair<double, double>{minmax, maxmin};
    };

    auto [minmax, maxmin] = solve_orders(17);
    if (std::abs(minmax - maxmin) > tol) {
        std::tie(minmax, maxmin) = solve_orders(65);
        if (std::abs(minmax - maxmin) > tol) {
            throw ContractError("minimax_cutoff: optimization orders disagree beyond tolerance");
        }
    }

    MinimaxReport report;
    report.minmax = minmax;
    report.maxmin = maxmin;
    report.kappa_star = 0.5 * (minmax + maxmin);

    const int surface_n = 9;
    for (int i = 0; i < surface_n; ++i) {
        report.xi0_grid.push_back(xi_range.lo + xi_range.length() * i / (surface_n - 1));
        report.xi1_grid.push_back(report.xi0_grid.back());
    }
    for (double xi0 : report.xi0_grid) {
        std::vector<double> row;
        for (double xi1 : report.xi1_grid) row.push_back(k(xi0, xi1));
        report.k_surface.push_back(std::move(row));
    }

    const EquilibriumReport eq = equilibrium_cutoffs(model, priors, ambiguity);
    if (eq.cutoffs.size() == 1 &&
        std::abs(report.kappa_star - eq.min_cutoff) > 1e-6 * (1.0 + std::abs(eq.min_cutoff))) {
        throw ContractError("minimax_cutoff: result disagrees with the unique equilibrium cutoff");
    }
    return report;
}

double xi_star(double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("xi_star requires eta > 0");
    const long double e = eta;
    const long double root = sqrtl(e * e + 12.0L * kPi * e + 4.0L * kPi * kPi);
    return double(e * (e - 2.0L * kPi + root) / (8.0L * kPi));
}

double cutoff_sensitivity_dy(double eta, double xi_lo, double y) {
    if (!(eta > 0.0) || !(xi_lo > 0.0)) {
        throw std::invalid_argument("cutoff_sensitivity_dy requires positive precisions");
    }
    auto diag = [&](double kappa) { return interim_payoff_linear(eta, y, xi_lo, kappa, kappa); };

    double lo = y - 1.0;
    double step = 2.0;
    while (!(diag(lo) < 0.0)) {
        lo -= step;
        step *= 2.0;
        if (std::abs(lo) > kSearchLimit) throw NumericalError("no lower sign change");
    }
    double hi = y + 1.0;
    step = 2.0;
    while (!(diag(hi) > 0.0)) {
        hi += step;
        step *= 2.0;
        if (std::abs(hi) > kSearchLimit) throw NumericalError("no upper sign change");
    }
    const RootSet rs = find_roots(diag, Interval{lo - 1.0, hi + 1.0}, kKappaScanPoints, 1e-12);
    if (rs.empty()) throw NumericalError("cutoff_sensitivity_dy: no equilibrium cutoff");
    const double k = rs.roots.back();

    const double gamma = std::sqrt(eta * eta * xi_lo / ((eta + xi_lo) * (eta + 2.0 * xi_lo)));
    const double dens = gamma * std_normal(gamma * (y - k)).pdf;
    const double numerator = eta / (eta + xi_lo) + dens;
    const double denominator = xi_lo / (eta + xi_lo) - dens;
    if (std::abs(denominator) < 1e-8) {
        throw NumericalError("cutoff_sensitivity_dy: denominator vanishes (tangent root)");
    }
    return -numerator / denominator;
}

bool uniqueness_certificate(double eta, double y, Interval xi_range) {
    if (!(y < 0.5)) {
        throw std::invalid_argument("uniqueness_certificate requires y < 1/2");
    }
    if (!(xi_range.lo > 0.0)) {
        throw std::invalid_argument("uniqueness_certificate requires positive precisions");
    }
    auto envelope = [&](double kappa) {
        if (xi_range.is_singleton()) {
            return interim_payoff_linear(eta, y, xi_range.lo, kappa, kappa);
        }
        return minimize_on_interval(
                   [&](double xi) { return interim_payoff_linear(eta, y, xi, kappa, kappa); },
                   xi_range, kXiScanPoints, kMinimizeTol)
            .min;
    };
    const Interval bridge{-eta * y / xi_range.hi, y};
    const double peak =
        -minimize_on_interval([&](double kappa) { return -envelope(kappa); }, bridge,
                              kXiScanPoints, kMinimizeTol)
             .min;
    const bool certified = peak < -kRootTol;
    if (certified) {
        const Scenario scenario = make_linear(eta, y);
        const AmbiguitySet ambiguity = AmbiguitySet::interval(xi_range.lo, xi_range.hi);
        const EquilibriumReport eq =
            equilibrium_cutoffs(scenario.model, scenario.priors, ambiguity);
        if (eq.cutoffs.size() != 1) {
            throw ContractError("uniqueness_certificate: certificate holds but several "
                                "equilibrium cutoffs were found");
        }
    }
    return certified;
}

std::vector<BinaryStrategyProfile> binary_intro_example(double p_lo, double p_hi,
                                                        double payoff_success, double payoff_fail,
                                                        double payoff_out, double threshold) {
    if (!(0.5 <= p_lo && p_lo <= p_hi && p_hi <= 1.0)) {
        throw std::invalid_argument("binary_intro_example requires 1/2 <= p_lo <= p_hi <= 1");
    }

    // Expected payoff to investing for a player with the given signal when
    // everyone follows (on_good, on_bad) and the accuracy is p. The
    // proportion of opponents sharing the player's signal is 1 - 2p(1-p).
    auto invest_value = [&](bool good_signal, const BinaryStrategyProfile& s, double p) {
        const double share_same = 1.0 - 2.0 * p * (1.0 - p);
        const double share_other = 2.0 * p * (1.0 - p);
        const int own_action = good_signal ? s.on_good : s.on_bad;
        const int other_action = good_signal ? s.on_bad : s.on_good;
        const double investing = share_same * own_action + share_other * other_action;
        const double p_good = good_signal ? p : 1.0 - p;
        const double payoff_good = investing > threshold ? payoff_success : payoff_fail;
        return p_good * payoff_good + (1.0 - p_good) * payoff_fail;
    };
    auto min_invest_value = [&](bool good_signal, const BinaryStrategyProfile& s) {
        const int n = 10000;
        double worst = kInf;
        for (int i = 0; i <= n; ++i) {
            const double p = (i == n) ? p_hi : p_lo + (p_hi - p_lo) * i / n;
            worst = std::min(worst, invest_value(good_signal, s, p));
        }
        return worst;
    };

    std::vector<BinaryStrategyProfile> equilibria;
    for (int on_good = 0; on_good <= 1; ++on_good) {
        for (int on_bad = 0; on_bad <= 1; ++on_bad) {
            const BinaryStrategyProfile s{on_good, on_bad};
            bool is_equilibrium = true;
            for (bool good_signal : {true, false}) {
                const double invest = min_invest_value(good_signal, s);
                const int assigned = good_signal ? on_good : on_bad;
                const double own = assigned == 1 ? invest : payoff_out;
                const double other = assigned == 1 ? payoff_out : invest;
                if (own < other - 1e-12) {
                    is_equilibrium = false;
                    break;
                }
            }
            if (is_equilibrium) equilibria.push_back(s);
        }
    }
    return equilibria;
}

} // namespace ambigg
