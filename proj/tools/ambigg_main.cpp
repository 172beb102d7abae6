#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "ambigg/cli.hpp"

namespace {

// Leftover arguments of the form --section.key value (or =value) override
// config keys by the same name.
std::vector<std::pair<std::string, std::string>> collect_overrides(std::vector<std::string> extras) {
    std::vector<std::pair<std::string, std::string>> overrides;
    // CLI11 returns remaining args in reverse order.
    std::reverse(extras.begin(), extras.end());
    for (std::size_t i = 0; i < extras.size(); ++i) {
        std::string arg = extras[i];
        if (arg.rfind("--", 0) != 0 || arg.find('.') == std::string::npos) {
            throw ambigg::ConfigError("unrecognized argument '" + arg + "'");
        }
        arg = arg.substr(2);
        const auto eq = arg.find('=');
        if (eq != std::string::npos) {
            overrides.emplace_back(arg.substr(0, eq), arg.substr(eq + 1));
        } else {
            if (i + 1 >= extras.size()) {
                throw ambigg::ConfigError("override '--" + arg + "' is missing a value");
            }
            overrides.emplace_back(arg, extras[++i]);
        }
    }
    return overrides;
}

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    double tol = -1.0;
    int grid = -1;
    std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "scenario config file");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--tol", flags.tol, "root residual tolerance");
    cmd->add_option("--grid", flags.grid, "cutoff scan density");
    cmd->add_option("--set", flags.sets, "override section.key=value")->take_all();
    cmd->allow_extras();
}

ambigg::RunConfig load_config(const CommonFlags& flags, CLI::App* cmd) {
    ambigg::RunConfig config;
    if (!flags.config_path.empty()) {
        config = ambigg::parse_config_file(flags.config_path);
    }
    for (const auto& kv : flags.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw ambigg::ConfigError("--set expects section.key=value, got '" + kv + "'");
        }
        ambigg::apply_override(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const auto& [key, value] : collect_overrides(cmd->remaining())) {
        ambigg::apply_override(config, key, value);
    }
    if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
    if (flags.tol > 0.0) config.root_tol = flags.tol;
    if (flags.grid > 1) config.kappa_scan = flags.grid;
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"switching-equilibrium solver for coordination games with ambiguous "
                 "information quality"};
    app.require_subcommand(1);

    CommonFlags solve_flags, validate_flags, crisis_flags, deletion_flags;
    std::string figure_id, figure_out = "out";
    int deletion_rounds = 0;

    CLI::App* solve = app.add_subcommand("solve", "solve for all equilibrium cutoffs");
    add_common(solve, solve_flags);
    CLI::App* validate = app.add_subcommand("validate", "check the maintained assumptions");
    add_common(validate, validate_flags);
    CLI::App* figure = app.add_subcommand("figure", "regenerate a bundled figure as CSV");
    figure->add_option("id", figure_id, "figure id (fig1a, fig1b, fig2a, fig2b, fig3)")
        ->required();
    figure->add_option("--out", figure_out, "output directory");
    CLI::App* crisis = app.add_subcommand("crisis", "sweep a parameter and report the crisis flag");
    add_common(crisis, crisis_flags);
    CLI::App* deletion = app.add_subcommand("deletion", "trace iterated deletion bounds");
    add_common(deletion, deletion_flags);
    deletion->add_option("--rounds", deletion_rounds, "maximum rounds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) {
            return ambigg::cmd_solve(load_config(solve_flags, solve), std::cout, std::cerr);
        }
        if (validate->parsed()) {
            return ambigg::cmd_validate(load_config(validate_flags, validate), std::cout,
                                        std::cerr);
        }
        if (figure->parsed()) {
            return ambigg::cmd_figure(figure_id, figure_out, std::cout, std::cerr);
        }
        if (crisis->parsed()) {
            return ambigg::cmd_crisis(load_config(crisis_flags, crisis), std::cout, std::cerr);
        }
        if (deletion->parsed()) {
            return ambigg::cmd_deletion(load_config(deletion_flags, deletion), deletion_rounds,
                                        std::cout, std::cerr);
        }
    } catch (const ambigg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
