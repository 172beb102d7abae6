#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ambigg/model.hpp"
#include "ambigg/presets.hpp"

namespace ambigg {

/// Config file rejected; carries the offending line for diagnostics.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                      : message),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Parsed scenario configuration: sectioned key-value file, every key
/// overridable from the command line.
struct RunConfig {
    // [model]
    std::string preset = "linear";
    double lambda = 0.4;
    double e_star = 2.0;
    double t = 0.2;
    double f_slope = 0.5;
    double f_intercept = 0.0;
    std::string f_steps = "0.3:0.2,1:1";
    CustomActionSpec custom0;
    CustomActionSpec custom1;
    std::optional<double> theta_lo;
    std::optional<double> theta_hi;

    // [prior]
    std::string prior_kind; // "normal" | "uniform"; preset default when empty
    double eta = 2.0;
    double y = 0.5;

    // [ambiguity]
    std::optional<double> xi_lo, xi_hi;
    std::optional<double> xi1_lo, xi1_hi, xi2_lo, xi2_hi;

    // [solver]
    double root_tol = kRootTol;
    double quad_tol = kQuadTol;
    double min_tol = kMinimizeTol;
    int kappa_scan = kKappaScanPoints;
    int xi_scan = kXiScanPoints;

    // [output]
    std::string out_dir = "out";

    // [figure]
    std::string figure_id;

    // [crisis]
    double theta_true = 0.45;
    double xi_true = 2.0;

    // [sweep]
    std::string sweep_param = "xi_hi"; // xi_hi | xi_lo | lambda | width
    double sweep_from = 1.0;
    double sweep_to = 100.0;
    int sweep_points = 20;
    std::string sweep_scale = "log"; // log | linear
    double sweep_center = 2.0;       // width sweeps widen around this precision

    // [deletion]
    int deletion_max_rounds = 100;
    double deletion_tol = 1e-8;
};

/// Parses the sectioned key-value format. Unknown sections or keys throw
/// ConfigError with the line number.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Applies one `section.key=value` override.
void apply_override(RunConfig& config, const std::string& dotted_key, const std::string& value);

/// Builds the scenario and ambiguity set a config describes.
std::pair<Scenario, AmbiguitySet> build_scenario(const RunConfig& config);

// Subcommands. Each returns the process exit code: 0 success,
// 2 configuration/validation failure, 3 numerical failure.
int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_figure(const std::string& figure_id, const std::string& out_dir, std::ostream& out,
               std::ostream& err);
int cmd_crisis(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_deletion(const RunConfig& config, int max_rounds, std::ostream& out, std::ostream& err);

} // namespace ambigg
