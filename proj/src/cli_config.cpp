#include "ambigg/cli.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace ambigg {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& value, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("value '" + value + "' for key '" + key + "' is not a number", line);
    }
}

int parse_int(const std::string& value, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("value '" + value + "' for key '" + key + "' is not an integer", line);
    }
}

std::vector<std::pair<double, double>> parse_pairs(const std::string& value,
                                                   const std::string& key, int line) {
    std::vector<std::pair<double, double>> pairs;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw ConfigError("entry '" + item + "' for key '" + key + "' must be a:b", line);
        }
        pairs.emplace_back(parse_double(trim(item.substr(0, colon)), key, line),
                           parse_double(trim(item.substr(colon + 1)), key, line));
    }
    if (pairs.empty()) {
        throw ConfigError("key '" + key + "' needs at least one a:b entry", line);
    }
    return pairs;
}

void set_key(RunConfig& c, const std::string& section, const std::string& key,
             const std::string& value, int line) {
    auto unknown = [&]() -> void {
        throw ConfigError("unknown key '" + key + "' in section [" + section + "]", line);
    };

    if (section == "model") {
        if (key == "preset") c.preset = value;
        else if (key == "lambda") c.lambda = parse_double(value, key, line);
        else if (key == "e_star") c.e_star = parse_double(value, key, line);
        else if (key == "t") c.t = parse_double(value, key, line);
        else if (key == "f_slope") c.f_slope = parse_double(value, key, line);
        else if (key == "f_intercept") c.f_intercept = parse_double(value, key, line);
        else if (key == "f_steps") c.f_steps = value;
        else if (key == "u0_intercept") c.custom0.intercept = parse_double(value, key, line);
        else if (key == "u0_l_slope") c.custom0.l_slope = parse_double(value, key, line);
        else if (key == "u0_theta_slope") c.custom0.theta_slope = parse_double(value, key, line);
        else if (key == "u0_theta_knots") c.custom0.theta_knots = parse_pairs(value, key, line);
        else if (key == "u1_intercept") c.custom1.intercept = parse_double(value, key, line);
        else if (key == "u1_l_slope") c.custom1.l_slope = parse_double(value, key, line);
        else if (key == "u1_theta_slope") c.custom1.theta_slope = parse_double(value, key, line);
        else if (key == "u1_theta_knots") c.custom1.theta_knots = parse_pairs(value, key, line);
        else if (key == "theta_lo") c.theta_lo = parse_double(value, key, line);
        else if (key == "theta_hi") c.theta_hi = parse_double(value, key, line);
        else unknown();
    } else if (section == "prior") {
        if (key == "kind") c.prior_kind = value;
        else if (key == "eta") c.eta = parse_double(value, key, line);
        else if (key == "y") c.y = parse_double(value, key, line);
        else unknown();
    } else if (section == "ambiguity") {
        if (key == "xi_lo") c.xi_lo = parse_double(value, key, line);
        else if (key == "xi_hi") c.xi_hi = parse_double(value, key, line);
        else if (key == "xi") {
            c.xi_lo = c.xi_hi = parse_double(value, key, line);
        } else if (key == "xi1_lo") c.xi1_lo = parse_double(value, key, line);
        else if (key == "xi1_hi") c.xi1_hi = parse_double(value, key, line);
        else if (key == "xi2_lo") c.xi2_lo = parse_double(value, key, line);
        else if (key == "xi2_hi") c.xi2_hi = parse_double(value, key, line);
        else unknown();
    } else if (section == "solver") {
        if (key == "root_tol") c.root_tol = parse_double(value, key, line);
        else if (key == "quad_tol") c.quad_tol = parse_double(value, key, line);
        else if (key == "min_tol") c.min_tol = parse_double(value, key, line);
        else if (key == "kappa_scan") c.kappa_scan = parse_int(value, key, line);
        else if (key == "xi_scan") c.xi_scan = parse_int(value, key, line);
        else unknown();
    } else if (section == "output") {
        if (key == "dir") c.out_dir = value;
        else unknown();
    } else if (section == "figure") {
        if (key == "id") c.figure_id = value;
        else unknown();
    } else if (section == "crisis") {
        if (key == "theta_true") c.theta_true = parse_double(value, key, line);
        else if (key == "xi_true") c.xi_true = parse_double(value, key, line);
        else unknown();
    } else if (section == "sweep") {
        if (key == "param") c.sweep_param = value;
        else if (key == "from") c.sweep_from = parse_double(value, key, line);
        else if (key == "to") c.sweep_to = parse_double(value, key, line);
        else if (key == "points") c.sweep_points = parse_int(value, key, line);
        else if (key == "scale") c.sweep_scale = value;
        else if (key == "center") c.sweep_center = parse_double(value, key, line);
        else unknown();
    } else if (section == "deletion") {
        if (key == "max_rounds") c.deletion_max_rounds = parse_int(value, key, line);
        else if (key == "tol") c.deletion_tol = parse_double(value, key, line);
        else unknown();
    } else {
        throw ConfigError("unknown section [" + section + "]", line);
    }
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig config;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("malformed section header", line_no);
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError("empty section name", line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected 'key = value'", line_no);
        }
        if (section.empty()) {
            throw ConfigError("key outside any [section]", line_no);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", line_no);
        set_key(config, section, key, value, line_no);
    }
    return config;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

void apply_override(RunConfig& config, const std::string& dotted_key, const std::string& value) {
    const auto dot = dotted_key.find('.');
    if (dot == std::string::npos) {
        throw ConfigError("override '" + dotted_key + "' must use section.key form");
    }
    set_key(config, dotted_key.substr(0, dot), dotted_key.substr(dot + 1), value, 0);
}

namespace {

StepTable parse_step_table(const std::string& text) {
    StepTable table;
    table.steps = parse_pairs(text, "f_steps", 0);
    return table;
}

} // namespace

std::pair<Scenario, AmbiguitySet> build_scenario(const RunConfig& config) {
    AmbiguitySet ambiguity = AmbiguitySet::singleton(1.0);
    try {
        if (config.xi1_lo || config.xi2_lo) {
            if (!(config.xi1_lo && config.xi1_hi && config.xi2_lo && config.xi2_hi)) {
                throw ConfigError("heterogeneous ambiguity needs xi1_lo/xi1_hi/xi2_lo/xi2_hi");
            }
            ambiguity = AmbiguitySet::product(Interval{*config.xi1_lo, *config.xi1_hi},
                                              Interval{*config.xi2_lo, *config.xi2_hi});
        } else {
            if (!(config.xi_lo && config.xi_hi)) {
                throw ConfigError("ambiguity needs xi_lo and xi_hi (or xi for a singleton)");
            }
            ambiguity = AmbiguitySet::interval(*config.xi_lo, *config.xi_hi);
        }

        std::string prior_kind = config.prior_kind;
        if (prior_kind.empty()) {
            prior_kind = (config.preset == "linear" || config.preset == "custom") ? "normal"
                                                                                  : "uniform";
        }

        Scenario scenario;
        if (config.preset == "linear") {
            if (prior_kind != "normal") {
                throw ConfigError("linear preset requires the normal prior");
            }
            scenario = make_linear(config.eta, config.y);
        } else if (config.preset == "debt") {
            scenario = make_debt(config.lambda);
        } else if (config.preset == "currency") {
            scenario = make_currency(config.e_star, config.t, config.f_slope, config.f_intercept);
        } else if (config.preset == "bankrun") {
            scenario = make_bankrun(parse_step_table(config.f_steps));
        } else if (config.preset == "custom") {
            PriorFamily priors = prior_kind == "uniform"
                                     ? PriorFamily::improper_uniform()
                                     : PriorFamily::normal_prior(config.eta, config.y);
            std::optional<std::pair<double, double>> bounds;
            if (config.theta_lo && config.theta_hi) {
                bounds = {{*config.theta_lo, *config.theta_hi}};
            }
            scenario = make_custom(config.custom0, config.custom1, priors, bounds);
        } else {
            throw ConfigError("unknown model preset '" + config.preset + "'");
        }
        if ((config.preset != "linear" && config.preset != "custom") && prior_kind != "uniform") {
            throw ConfigError("regime presets use the improper uniform prior");
        }
        return {scenario, ambiguity};
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

} // namespace ambigg
