#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ambigg/cli.hpp"
#include "ambigg/equilibrium.hpp"
#include "ambigg/errors.hpp"
#include "ambigg/regime.hpp"

namespace ambigg {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::string num17(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

int thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("AMBIGG_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && cap < static_cast<long>(hw)) hw = static_cast<unsigned>(cap);
    }
    return static_cast<int>(hw);
}

// Index-parallel loop with deterministic output: every index writes its own
// slot. Thread count honors AMBIGG_THREADS.
void parallel_for(int n, const std::function<void(int)>& body) {
    const int workers = std::min(thread_budget(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!failed.exchange(true)) error = e.what();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed) throw NumericalError("parallel sweep failed: " + error);
}

int map_exception(const std::exception& e, std::ostream& err) {
    err << "error: " << e.what() << "\n";
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const std::invalid_argument*>(&e)) {
        return kExitConfig;
    }
    return kExitNumerical;
}

// Assumption failures block solving unless they concern the declared
// state-independent action, whose payoff may legitimately rise with the
// opponent mass; the safe-action reduction still applies there.
bool failure_exempted(const ValidationReport::Check& check, const PayoffModel& model) {
    if (!model.state_independent_action) return false;
    if (check.id != "A1" && check.id != "A2") return false;
    const std::string needle = "u(" + std::to_string(*model.state_independent_action);
    return check.detail.find(needle) != std::string::npos;
}

struct GateResult {
    bool ok;
    std::string blocking;
    std::vector<std::string> warnings;
};

GateResult gate_assumptions(const ValidationReport& report, const PayoffModel& model) {
    GateResult g{true, {}, {}};
    for (const auto& check : report.checks) {
        if (check.passed) continue;
        if (failure_exempted(check, model)) {
            g.warnings.push_back(check.id + " waived for the state-independent action: " +
                                 check.detail);
        } else if (g.ok) {
            g.ok = false;
            g.blocking = check.id + " failed: " + check.detail;
        }
    }
    return g;
}

nlohmann::json meu_to_json(const MeuResult& m) {
    nlohmann::json j{{"value", m.value},
                     {"argmin_xi", m.argmin_own},
                     {"on_boundary", m.attained_on_boundary},
                     {"degenerate", m.degenerate},
                     {"tied", m.tied}};
    if (m.argmin_others) j["argmin_xi_others"] = *m.argmin_others;
    return j;
}

} // namespace

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const auto [scenario, ambiguity] = build_scenario(config);
        const ValidationReport validation =
            validate_assumptions(scenario.model, scenario.priors, ambiguity);
        const GateResult gate = gate_assumptions(validation, scenario.model);
        for (const auto& w : gate.warnings) err << "warning: " << w << "\n";
        if (!gate.ok) {
            err << "validation failed: " << gate.blocking << "\n";
            return kExitConfig;
        }

        const EquilibriumReport report = equilibrium_cutoffs(
            scenario.model, scenario.priors, ambiguity, config.kappa_scan, config.root_tol);

        std::ostringstream text;
        text << "model: " << scenario.model.name << "\n";
        text << "dominance window: [" << num17(report.x_lo) << ", " << num17(report.x_hi)
             << "]\n";
        text << "cutoffs (" << report.cutoffs.size() << "):\n";
        for (const auto& root : report.roots) {
            text << "  kappa = " << num17(root.kappa) << "  residual = " << num17(root.residual)
                 << "  argmin_xi(action1) = " << num17(root.action1.argmin_own)
                 << "  argmin_xi(action0) = " << num17(root.action0.argmin_own) << "\n";
        }
        text << "min cutoff: " << num17(report.min_cutoff) << "\n";
        text << "max cutoff: " << num17(report.max_cutoff) << "\n";
        text << "note: " << report.note << "\n";

        nlohmann::json j;
        j["model"] = scenario.model.name;
        j["dominance_window"] = {report.x_lo, report.x_hi};
        j["residual_tol"] = report.cutoffs.residual_tol;
        j["min_cutoff"] = report.min_cutoff;
        j["max_cutoff"] = report.max_cutoff;
        j["note"] = report.note;
        j["cutoffs"] = nlohmann::json::array();
        for (const auto& root : report.roots) {
            j["cutoffs"].push_back({{"kappa", root.kappa},
                                    {"residual", root.residual},
                                    {"action1", meu_to_json(root.action1)},
                                    {"action0", meu_to_json(root.action0)}});
        }

        const std::filesystem::path dir(config.out_dir);
        atomic_write(dir / "report.txt", text.str());
        atomic_write(dir / "report.json", j.dump(2) + "\n");
        out << text.str();
        out << "wrote " << (dir / "report.txt").string() << " and "
            << (dir / "report.json").string() << "\n";

        for (const auto& root : report.roots) {
            if (root.residual > config.root_tol) {
                err << "residual above tolerance at kappa=" << num17(root.kappa) << "\n";
                return kExitNumerical;
            }
        }
        return kExitOk;
    } catch (const std::exception& e) {
        return map_exception(e, err);
    }
}

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const auto [scenario, ambiguity] = build_scenario(config);
        const ValidationReport report =
            validate_assumptions(scenario.model, scenario.priors, ambiguity);
        for (const auto& check : report.checks) {
            out << check.id << ": " << (check.passed ? "pass" : "FAIL") << " (" << check.detail
                << ")\n";
        }
        const GateResult gate = gate_assumptions(report, scenario.model);
        for (const auto& w : gate.warnings) err << "warning: " << w << "\n";
        if (!gate.ok) {
            err << "validation failed: " << gate.blocking << "\n";
            return kExitConfig;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        return map_exception(e, err);
    }
}

namespace {

struct CurveSpec {
    std::string label;
    std::string slug;
    std::function<double(double)> value;
};

struct FigureSpec {
    Interval range{0.0, 1.0};
    int points = 801;
    std::vector<CurveSpec> curves;
};

std::function<double(double)> linear_diagonal(double eta, double y, double xi) {
    return [=](double kappa) { return interim_payoff_linear(eta, y, xi, kappa, kappa); };
}

std::function<double(double)> linear_envelope(double eta, double y, Interval xi_range) {
    return [=](double kappa) {
        return minimize_on_interval(
                   [&](double xi) { return interim_payoff_linear(eta, y, xi, kappa, kappa); },
                   xi_range, kXiScanPoints, kMinimizeTol)
            .min;
    };
}

FigureSpec figure_spec(const std::string& id) {
    FigureSpec spec;
    if (id == "fig1a" || id == "fig1b") {
        const double y = id == "fig1a" ? 0.52 : 0.48;
        spec.range = Interval{-3.0, 4.0};
        spec.points = 801;
        for (double xi : {1e6, 1.1, 0.56, 0.37}) {
            std::ostringstream label;
            label << "xi=" << xi;
            std::ostringstream slug;
            slug << "xi_" << xi;
            std::string s = slug.str();
            for (char& c : s) {
                if (c == '.' || c == '+') c = 'p';
            }
            spec.curves.push_back({label.str(), s, linear_diagonal(2.0, y, xi)});
        }
        return spec;
    }
    if (id == "fig2a") {
        spec.range = Interval{-3.0, 4.0};
        spec.points = 801;
        spec.curves.push_back({"Xi=[1,3]", "env_1_3", linear_envelope(2.0, 0.55, {1.0, 3.0})});
        spec.curves.push_back({"Xi={2}", "xi_2", linear_diagonal(2.0, 0.55, 2.0)});
        return spec;
    }
    if (id == "fig2b") {
        spec.range = Interval{-3.0, 4.0};
        spec.points = 801;
        spec.curves.push_back({"Xi={1}", "xi_1", linear_diagonal(2.0, 0.55, 1.0)});
        spec.curves.push_back({"Xi={2}", "xi_2", linear_diagonal(2.0, 0.55, 2.0)});
        return spec;
    }
    if (id == "fig3") {
        spec.range = Interval{-10.0, 13000.0};
        spec.points = 8193;
        spec.curves.push_back(
            {"Xi=[1e-4,0.1]", "env_1em4_0p1", linear_envelope(2.0, 0.4, {1e-4, 0.1})});
        spec.curves.push_back({"Xi={0.1}", "xi_0p1", linear_diagonal(2.0, 0.4, 0.1)});
        return spec;
    }
    throw ConfigError("unknown figure id '" + id + "'");
}

} // namespace

int cmd_figure(const std::string& figure_id, const std::string& out_dir, std::ostream& out,
               std::ostream& err) {
    try {
        const FigureSpec spec = figure_spec(figure_id);
        const std::filesystem::path dir(out_dir);
        std::vector<std::string> files;

        for (const auto& curve : spec.curves) {
            std::vector<double> kappas(spec.points), values(spec.points);
            parallel_for(spec.points, [&](int i) {
                const double kappa = (i == spec.points - 1)
                                         ? spec.range.hi
                                         : spec.range.lo + spec.range.length() * i /
                                                               (spec.points - 1);
                kappas[i] = kappa;
                values[i] = curve.value(kappa);
            });
            std::ostringstream csv;
            csv << "kappa,value,curve_label\n";
            for (int i = 0; i < spec.points; ++i) {
                csv << num17(kappas[i]) << "," << num17(values[i]) << "," << curve.label << "\n";
            }
            const std::string name = figure_id + "_" + curve.slug + ".csv";
            atomic_write(dir / name, csv.str());
            files.push_back(name);
        }

        std::ostringstream plot;
        plot << "# line plot over column 1 (kappa) vs column 2 (value)\n";
        plot << "set datafile separator \",\"\n";
        plot << "set xlabel \"kappa\"\n";
        plot << "set ylabel \"worst-case payoff to acting\"\n";
        plot << "set key outside\n";
        plot << "plot \\\n";
        for (std::size_t i = 0; i < files.size(); ++i) {
            plot << "  \"" << files[i] << "\" using 1:2 skip 1 with lines title \""
                 << spec.curves[i].label << "\"" << (i + 1 < files.size() ? ", \\" : "") << "\n";
        }
        atomic_write(dir / (figure_id + "_plot.txt"), plot.str());

        for (const auto& f : files) out << "wrote " << (dir / f).string() << "\n";
        out << "wrote " << (dir / (figure_id + "_plot.txt")).string() << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        return map_exception(e, err);
    }
}

int cmd_crisis(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.preset != "debt" && config.preset != "currency") {
            throw ConfigError("crisis sweeps support the debt and currency presets");
        }
        const auto [scenario, base_ambiguity] = build_scenario(config);
        if (base_ambiguity.kind != AmbiguitySet::Kind::interval) {
            throw ConfigError("crisis sweeps use an interval ambiguity set");
        }
        if (!scenario.regime) throw ConfigError("crisis sweeps need a regime-change preset");

        std::vector<double> values(config.sweep_points);
        if (config.sweep_points < 1) throw ConfigError("sweep needs points >= 1");
        for (int i = 0; i < config.sweep_points; ++i) {
            const double w = config.sweep_points == 1
                                 ? 0.0
                                 : static_cast<double>(i) / (config.sweep_points - 1);
            if (config.sweep_scale == "log") {
                if (!(config.sweep_from > 0.0 && config.sweep_to > 0.0)) {
                    throw ConfigError("log sweeps need positive endpoints");
                }
                values[i] = std::exp(std::log(config.sweep_from) +
                                     w * (std::log(config.sweep_to) - std::log(config.sweep_from)));
            } else if (config.sweep_scale == "linear") {
                values[i] = config.sweep_from + w * (config.sweep_to - config.sweep_from);
            } else {
                throw ConfigError("unknown sweep scale '" + config.sweep_scale + "'");
            }
        }

        struct Row {
            double param;
            double kstar;
            double theta;
            std::string occurs;
        };
        std::vector<Row> rows(values.size());

        parallel_for(static_cast<int>(values.size()), [&](int i) {
            const double v = values[i];
            double lambda = config.lambda;
            Interval xi = base_ambiguity.xi;
            if (config.sweep_param == "xi_hi") {
                xi = Interval{std::min(xi.lo, v), v};
            } else if (config.sweep_param == "xi_lo") {
                xi = Interval{v, std::max(xi.hi, v)};
            } else if (config.sweep_param == "lambda") {
                lambda = v;
            } else if (config.sweep_param == "width") {
                xi = Interval{config.sweep_center / (1.0 + v), config.sweep_center * (1.0 + v)};
            } else {
                throw ConfigError("unknown sweep param '" + config.sweep_param + "'");
            }
            const AmbiguitySet ambiguity = AmbiguitySet::interval(xi.lo, xi.hi);

            if (config.preset == "debt") {
                try {
                    const CrisisOutcome o =
                        crisis_occurs({lambda, config.theta_true, config.xi_true, ambiguity});
                    rows[i] = {v, o.kappa_star, theta_star(o.kappa_star, config.xi_true),
                               o.occurs ? "1" : "0"};
                } catch (const DegenerateCaseError&) {
                    // lambda = 1/2: the cutoff is 1/2 for every precision.
                    rows[i] = {v, 0.5, theta_star(0.5, config.xi_true), "degenerate"};
                }
            } else {
                const double kstar = ambiguous_cutoff(*scenario.regime, ambiguity);
                const double theta = theta_star(kstar, config.xi_true);
                rows[i] = {v, kstar, theta, config.theta_true <= theta ? "1" : "0"};
            }
        });

        std::ostringstream csv;
        csv << "param,kstar,theta_star,occurs\n";
        for (const auto& row : rows) {
            csv << num17(row.param) << "," << num17(row.kstar) << "," << num17(row.theta) << ","
                << row.occurs << "\n";
        }
        const std::filesystem::path path = std::filesystem::path(config.out_dir) / "crisis.csv";
        atomic_write(path, csv.str());

        if (config.preset == "debt" && std::abs(config.lambda - 0.5) >= 1e-12) {
            const double theta_bar = config.lambda < 0.5
                                         ? theta_star(config.lambda, config.xi_true)
                                         : 1.0;
            out << "theta_bar(lambda=" << num17(config.lambda) << ", xi=" << num17(config.xi_true)
                << ") = " << num17(theta_bar) << "\n";
        }
        out << "wrote " << path.string() << " (" << rows.size() << " rows)\n";
        return kExitOk;
    } catch (const std::exception& e) {
        return map_exception(e, err);
    }
}

int cmd_deletion(const RunConfig& config, int max_rounds, std::ostream& out, std::ostream& err) {
    try {
        const auto [scenario, ambiguity] = build_scenario(config);
        const int rounds = max_rounds > 0 ? max_rounds : config.deletion_max_rounds;
        const DeletionTrace trace = iterated_deletion(scenario.model, scenario.priors, ambiguity,
                                                      rounds, config.deletion_tol);

        std::ostringstream table;
        table << "round,lower,upper,d_lower,d_upper\n";
        for (std::size_t n = 0; n < trace.rounds.size(); ++n) {
            const auto& r = trace.rounds[n];
            table << n << "," << num17(r.lower) << "," << num17(r.upper);
            if (n == 0) {
                table << ",,";
            } else {
                table << "," << num17(r.lower - trace.rounds[n - 1].lower) << ","
                      << num17(trace.rounds[n - 1].upper - r.upper);
            }
            table << "\n";
        }
        out << table.str();
        out << (trace.converged ? "converged" : "round budget exhausted") << ": lower "
            << num17(trace.rounds.back().lower) << ", upper " << num17(trace.rounds.back().upper)
            << "\n";
        const std::filesystem::path path =
            std::filesystem::path(config.out_dir) / "deletion.csv";
        atomic_write(path, table.str());
        out << "wrote " << path.string() << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        return map_exception(e, err);
    }
}

} // namespace ambigg
