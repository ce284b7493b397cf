#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "otoc/rbm.hpp"

namespace otoc {

struct SamplerConfig {
    int n_chains = 2;
    int n_sweeps = 1000;      // measured sweeps per chain (after burn-in)
    int burn_in_sweeps = 100;
    int thinning = 1;         // retain every thinning-th measured sweep
    std::uint64_t seed = 1;

    void validate() const;
    int samples_per_chain() const;  // retained configurations per chain
};

// Unweighted configurations drawn from |Psi|^2, stored one per column in
// chain-major order (chain 0's samples first).
struct SampleBatch {
    Eigen::MatrixXi configs;  // N x B
    int n_chains = 1;
    double acceptance_rate = 0.0;

    int size() const { return static_cast<int>(configs.cols()); }
    int samples_per_chain() const { return size() / n_chains; }
    SpinConfig config(int i) const { return configs.col(i); }
};

// Metropolis sampling of |Psi(S)|^2. One sweep proposes N single-spin
// flips at uniformly random sites, each accepted with min(1, |ratio|^2).
// Chains run independently (chain c is seeded with mix_seed(seed, c)) and
// are merged in chain order, so the result does not depend on n_threads.
SampleBatch sample(const RbmState& psi, const SamplerConfig& cfg, int n_threads = 0);

// Serial reference; bit-identical to sample() by construction.
SampleBatch sample_serial(const RbmState& psi, const SamplerConfig& cfg);

}  // namespace otoc
