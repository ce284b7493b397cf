#include "otoc/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "otoc/io.hpp"

namespace otoc {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct Field {
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

template <typename T>
T parse_value(const std::string& raw);

template <>
int parse_value<int>(const std::string& raw) {
    std::size_t used = 0;
    int v = std::stoi(raw, &used);
    if (used != raw.size()) throw std::invalid_argument("trailing characters");
    return v;
}

template <>
double parse_value<double>(const std::string& raw) {
    std::size_t used = 0;
    double v = std::stod(raw, &used);
    if (used != raw.size()) throw std::invalid_argument("trailing characters");
    return v;
}

template <>
std::uint64_t parse_value<std::uint64_t>(const std::string& raw) {
    std::size_t used = 0;
    std::uint64_t v = std::stoull(raw, &used);
    if (used != raw.size()) throw std::invalid_argument("trailing characters");
    return v;
}

template <>
std::string parse_value<std::string>(const std::string& raw) {
    return raw;
}

std::string to_text(int v) { return std::to_string(v); }
std::string to_text(std::uint64_t v) { return std::to_string(v); }
std::string to_text(double v) { return format_double(v); }
std::string to_text(const std::string& v) { return v; }

const std::map<std::string, Field>& field_table() {
    static const std::map<std::string, Field> table = [] {
        std::map<std::string, Field> t;
        auto add = [&t](const std::string& key, auto member) {
            t[key] = Field{
                [member](RunConfig& cfg, const std::string& raw) {
                    cfg.*member = parse_value<std::decay_t<decltype(cfg.*member)>>(raw);
                },
                [member](const RunConfig& cfg) { return to_text(cfg.*member); }};
        };
        add("format_version", &RunConfig::format_version);
        add("experiment", &RunConfig::experiment);
        add("rows", &RunConfig::rows);
        add("cols", &RunConfig::cols);
        add("h", &RunConfig::h);
        add("j", &RunConfig::j);
        add("v1_pauli", &RunConfig::v1_pauli);
        add("v1_row", &RunConfig::v1_row);
        add("v1_col", &RunConfig::v1_col);
        add("v2_pauli", &RunConfig::v2_pauli);
        add("v2_row", &RunConfig::v2_row);
        add("v2_col", &RunConfig::v2_col);
        add("t_max", &RunConfig::t_max);
        add("n_points", &RunConfig::n_points);
        add("alpha", &RunConfig::alpha);
        add("sigma", &RunConfig::sigma);
        add("seed", &RunConfig::seed);
        add("ensemble_size", &RunConfig::ensemble_size);
        add("thermal_sigma", &RunConfig::thermal_sigma);
        add("overlap_chains", &RunConfig::overlap_chains);
        add("overlap_sweeps", &RunConfig::overlap_sweeps);
        add("overlap_burn_in", &RunConfig::overlap_burn_in);
        add("overlap_thinning", &RunConfig::overlap_thinning);
        add("dt", &RunConfig::dt);
        add("regularization", &RunConfig::regularization);
        add("dyn_samples", &RunConfig::dyn_samples);
        add("dyn_chains", &RunConfig::dyn_chains);
        add("dyn_burn_in", &RunConfig::dyn_burn_in);
        add("train_eta", &RunConfig::train_eta);
        add("train_steps", &RunConfig::train_steps);
        add("train_samples", &RunConfig::train_samples);
        add("train_chains", &RunConfig::train_chains);
        add("train_burn_in", &RunConfig::train_burn_in);
        add("oracle_cap", &RunConfig::oracle_cap);
        add("with_oracle", &RunConfig::with_oracle);
        add("workers", &RunConfig::workers);
        add("fit", &RunConfig::fit);
        add("fit_threshold", &RunConfig::fit_threshold);
        add("fit_distance", &RunConfig::fit_distance);
        add("load_state", &RunConfig::load_state);
        add("save_state", &RunConfig::save_state);
        return t;
    }();
    return table;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> errors;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back(origin + ":" + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto it = field_table().find(key);
        if (it == field_table().end()) {
            errors.push_back(origin + ":" + std::to_string(lineno) + ": unknown key '" + key +
                             "'");
            continue;
        }
        try {
            it->second.set(cfg, value);
        } catch (const std::exception&) {
            errors.push_back(origin + ":" + std::to_string(lineno) + ": bad value for '" + key +
                             "': '" + value + "'");
        }
    }
    if (!errors.empty()) {
        std::string msg = "config errors:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config_text(buf.str(), path);
}

void validate_config(const RunConfig& cfg) {
    std::vector<std::string> errors;
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) errors.push_back(msg);
    };

    require(cfg.format_version == 1, "format_version: only version 1 is supported");
    require(cfg.experiment == "pure" || cfg.experiment == "ground" || cfg.experiment == "thermal",
            "experiment: must be pure, ground or thermal");
    require(cfg.rows >= 2, "rows: must be >= 2");
    require(cfg.cols >= 2, "cols: must be >= 2");
    require(std::isfinite(cfg.h), "h: must be finite");
    require(std::isfinite(cfg.j), "j: must be finite");
    for (const auto& [name, pauli] : {std::pair{"v1_pauli", cfg.v1_pauli},
                                      std::pair{"v2_pauli", cfg.v2_pauli}}) {
        require(pauli == "x" || pauli == "y" || pauli == "z",
                std::string(name) + ": must be x, y or z");
    }
    if (cfg.rows >= 2 && cfg.cols >= 2) {
        auto inside = [&](int r, int c) { return r >= 0 && r < cfg.rows && c >= 0 && c < cfg.cols; };
        require(inside(cfg.v1_row, cfg.v1_col), "v1_row/v1_col: site outside the lattice");
        require(inside(cfg.v2_row, cfg.v2_col), "v2_row/v2_col: site outside the lattice");
    }
    require(cfg.t_max > 0.0, "t_max: must be > 0");
    require(cfg.n_points >= 1, "n_points: must be >= 1");
    require(cfg.alpha > 0.0, "alpha: must be > 0");
    require(cfg.sigma >= 0.0, "sigma: must be >= 0");
    require(cfg.thermal_sigma >= 0.0, "thermal_sigma: must be >= 0");
    require(cfg.ensemble_size >= 2 || cfg.experiment != "thermal",
            "ensemble_size: must be >= 2 for thermal runs");
    require(cfg.overlap_chains >= 1, "overlap_chains: must be >= 1");
    require(cfg.overlap_sweeps >= 1, "overlap_sweeps: must be >= 1");
    require(cfg.overlap_burn_in >= 0, "overlap_burn_in: must be >= 0");
    require(cfg.overlap_thinning >= 1, "overlap_thinning: must be >= 1");
    require(cfg.dt > 0.0, "dt: must be > 0");
    require(cfg.regularization >= 0.0, "regularization: must be >= 0");
    require(cfg.dyn_samples >= 10, "dyn_samples: must be >= 10");
    require(cfg.dyn_chains >= 1, "dyn_chains: must be >= 1");
    require(cfg.dyn_burn_in >= 0, "dyn_burn_in: must be >= 0");
    require(cfg.train_eta > 0.0, "train_eta: must be > 0");
    require(cfg.train_steps >= 1, "train_steps: must be >= 1");
    require(cfg.train_samples >= 10, "train_samples: must be >= 10");
    require(cfg.train_chains >= 1, "train_chains: must be >= 1");
    require(cfg.oracle_cap >= 1, "oracle_cap: must be >= 1");
    require(cfg.with_oracle == "auto" || cfg.with_oracle == "on" || cfg.with_oracle == "off",
            "with_oracle: must be auto, on or off");
    require(cfg.workers >= 0, "workers: must be >= 0");
    require(cfg.fit == "on" || cfg.fit == "off", "fit: must be on or off");
    require(cfg.fit_threshold > 0.0 && cfg.fit_threshold < 1.0,
            "fit_threshold: must be in (0, 1)");
    require(cfg.fit_distance >= 0.0, "fit_distance: must be >= 0");

    if (!errors.empty()) {
        std::string msg = "config errors:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
}

std::string serialize_config(const RunConfig& cfg) {
    // Emit in a fixed order so manifests are stable.
    static const std::vector<std::string> order = {
        "format_version", "experiment", "rows", "cols", "h", "j",
        "v1_pauli", "v1_row", "v1_col", "v2_pauli", "v2_row", "v2_col",
        "t_max", "n_points", "alpha", "sigma", "seed",
        "ensemble_size", "thermal_sigma",
        "overlap_chains", "overlap_sweeps", "overlap_burn_in", "overlap_thinning",
        "dt", "regularization", "dyn_samples", "dyn_chains", "dyn_burn_in",
        "train_eta", "train_steps", "train_samples", "train_chains", "train_burn_in",
        "oracle_cap", "with_oracle", "workers",
        "fit", "fit_threshold", "fit_distance",
        "load_state", "save_state"};
    std::string out;
    for (const auto& key : order) {
        out += key + " = " + field_table().at(key).get(cfg) + "\n";
    }
    return out;
}

}  // namespace otoc
