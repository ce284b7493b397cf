#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "otoc/hamiltonian.hpp"
#include "otoc/rbm.hpp"
#include "otoc/sampler.hpp"

namespace otoc {

// Stochastic-reconfiguration settings. step_size is the learning rate for
// ground-state training and the time step for real-time evolution, in
// units of 1/J.
struct SrConfig {
    double step_size = 0.005;
    double regularization = 1e-4;  // diagonal shift on the covariance matrix
    int samples_per_step = 5000;
    int max_steps = 500;
    std::uint64_t seed = 1;
    int n_chains = 4;
    int burn_in_sweeps = 100;
    int n_threads = 0;

    void validate() const;
};

enum class Direction { forward, backward };

struct PhaseStep {
    int step = 0;
    double t = 0.0;               // time reached after this step
    Complex energy;               // batch mean energy before the update
    double energy_err_re = 0.0;
    double energy_err_im = 0.0;
    Complex overlap_before_after; // normalized one-sided overlap estimate
    double delta_phi = 0.0;
    double accumulated_phi = 0.0;
    bool step_size_warning = false;  // |delta_phi| >= pi/2
};

struct PhaseLog {
    std::vector<PhaseStep> steps;

    double total_phase() const {
        return steps.empty() ? 0.0 : steps.back().accumulated_phi;
    }
};

struct SrMatrices {
    Eigen::MatrixXcd s_cov;   // <O* O^T> - <O*><O^T>
    Eigen::VectorXcd f_force; // <O* E> - <O*><E>
};

SrMatrices sr_matrices(const RbmState& psi, const Hamiltonian& ham, const SampleBatch& batch,
                       int n_threads = 0);

struct TrainResult {
    RbmState state;
    std::vector<double> energy_history;  // Re of the batch mean per step
    bool converged = false;
};

// Iterates p -> p - eta (S + eps I)^{-1} F until max_steps or an energy
// plateau (relative change below 1e-6 across 50 steps).
TrainResult train_ground_state(const RbmState& psi0, const Hamiltonian& ham, const SrConfig& cfg);

struct StepResult {
    RbmState state;
    PhaseStep record;
};

// One first-order evolution step p -> p -+ i dt (S + eps I)^{-1} F
// (sign by direction). The phase increment is extracted from the
// before/after overlap o via delta_phi = arg(o) - arg(1 - i E dt), with E
// and o estimated on the same pre-step sample batch.
StepResult evolve_step(const RbmState& psi, const Hamiltonian& ham, const SrConfig& cfg,
                       Direction direction, int step_index = 0, double t_start = 0.0,
                       double dt_override = -1.0);

struct EvolveResult {
    RbmState state;
    PhaseLog log;
};

// Repeats evolve_step for ceil(t_final / dt) steps, truncating the last
// step to land exactly on t_final. Log times count elapsed duration along
// the segment regardless of direction.
EvolveResult evolve(const RbmState& psi, const Hamiltonian& ham, double t_final,
                    const SrConfig& cfg, Direction direction);

}  // namespace otoc
