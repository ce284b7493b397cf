#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace otoc {

// Raised for invalid configuration; message lists every violated field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Plain-text key = value configuration for one experiment run. Every field
// has a default and every field is echoed into the run manifest, so a
// manifest is itself a valid config reproducing the run.
struct RunConfig {
    int format_version = 1;
    std::string experiment = "pure";  // pure | ground | thermal

    int rows = 0;
    int cols = 0;
    double h = 1.0;
    double j = 1.0;

    std::string v1_pauli = "x";
    int v1_row = 0, v1_col = 0;
    std::string v2_pauli = "y";
    int v2_row = 0, v2_col = 1;

    double t_max = 0.5;
    int n_points = 10;  // grid t_i = i * t_max / n_points, i = 0..n_points

    double alpha = 2.0;   // hidden units per site
    double sigma = 0.1;   // random-init width (pure runs and ground training)
    std::uint64_t seed = 1;

    int ensemble_size = 10;       // thermal runs
    double thermal_sigma = 0.02;  // init width for the product-state training

    // overlap estimation
    int overlap_chains = 8;
    int overlap_sweeps = 2500;  // measured sweeps per chain
    int overlap_burn_in = 100;
    int overlap_thinning = 1;

    // real-time evolution
    double dt = 0.005;
    double regularization = 1e-4;
    int dyn_samples = 5000;
    int dyn_chains = 8;
    int dyn_burn_in = 100;

    // ground-state / product-state training
    double train_eta = 0.02;
    int train_steps = 400;
    int train_samples = 2000;
    int train_chains = 8;
    int train_burn_in = 100;

    int oracle_cap = 16;
    std::string with_oracle = "auto";  // auto | on | off
    int workers = 0;                   // 0 = all hardware threads

    std::string fit = "off";  // off | on: fit the curve after the run
    double fit_threshold = 0.85;
    double fit_distance = 0.0;  // 0 = graph distance between v1 and v2

    std::string load_state;  // optional checkpoint to start pure runs from
    std::string save_state;  // optional checkpoint of the initial/trained state
};

RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");
RunConfig parse_config_file(const std::string& path);

// Throws ConfigError listing all violations.
void validate_config(const RunConfig& cfg);

// Full key = value serialization (the manifest body).
std::string serialize_config(const RunConfig& cfg);

}  // namespace otoc
