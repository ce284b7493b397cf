#include "otoc/dynamics.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>

#include "otoc/kernels.hpp"
#include "otoc/rng.hpp"

namespace otoc {

namespace {

constexpr std::uint64_t kSamplerSalt = 0x5a;

double wrap_angle(double phi) {
    while (phi > std::numbers::pi) phi -= 2.0 * std::numbers::pi;
    while (phi <= -std::numbers::pi) phi += 2.0 * std::numbers::pi;
    return phi;
}

SamplerConfig sampler_for_step(const SrConfig& cfg, std::uint64_t step_seed) {
    SamplerConfig scfg;
    scfg.n_chains = cfg.n_chains;
    scfg.n_sweeps = (cfg.samples_per_step + cfg.n_chains - 1) / cfg.n_chains;
    scfg.burn_in_sweeps = cfg.burn_in_sweeps;
    scfg.thinning = 1;
    scfg.seed = step_seed;
    return scfg;
}

// (S + eps I) x = F with an escalating regularization ladder; ill
// conditioning surfaces as a failure instead of a silent bad step.
Eigen::VectorXcd solve_regularized(const Eigen::MatrixXcd& s_cov, const Eigen::VectorXcd& f_force,
                                   double regularization) {
    double eps = regularization;
    for (int attempt = 0; attempt < 4; ++attempt, eps *= 10.0) {
        Eigen::MatrixXcd shifted = s_cov;
        shifted.diagonal().array() += eps;
        Eigen::LDLT<Eigen::MatrixXcd> ldlt(shifted);
        if (ldlt.info() != Eigen::Success) continue;
        Eigen::VectorXcd x = ldlt.solve(f_force);
        if (x.allFinite()) return x;
    }
    throw std::runtime_error("dynamics: SR solve failed after regularization ladder");
}

struct BatchEstimates {
    SampleBatch batch;
    Eigen::MatrixXcd o_mat;
    Eigen::VectorXcd e_loc;
    kernels::GramResult gram;
    EnergyEstimate energy;
};

BatchEstimates sample_and_estimate(const RbmState& psi, const Hamiltonian& ham,
                                   const SrConfig& cfg, std::uint64_t step_seed) {
    BatchEstimates out;
    out.batch = sample(psi, sampler_for_step(cfg, step_seed), cfg.n_threads);
    kernels::observables_batch(psi, ham, out.batch, out.o_mat, out.e_loc, cfg.n_threads);
    out.gram = kernels::gram(out.o_mat, out.e_loc, cfg.n_threads);

    out.energy.value = out.gram.e_mean;
    const int groups = out.batch.n_chains >= 2 ? out.batch.n_chains
                                               : std::min(16, out.batch.size());
    const int b = out.batch.size();
    double var_re = 0.0, var_im = 0.0;
    for (int g = 0; g < groups; ++g) {
        const int lo = static_cast<int>(static_cast<long>(b) * g / groups);
        const int hi = static_cast<int>(static_cast<long>(b) * (g + 1) / groups);
        const Complex m = out.e_loc.segment(lo, hi - lo).mean();
        var_re += (m.real() - out.energy.value.real()) * (m.real() - out.energy.value.real());
        var_im += (m.imag() - out.energy.value.imag()) * (m.imag() - out.energy.value.imag());
    }
    if (groups >= 2) {
        const double denom = static_cast<double>(groups) * (groups - 1.0);
        out.energy.err_re = std::sqrt(var_re / denom);
        out.energy.err_im = std::sqrt(var_im / denom);
    }
    return out;
}

}  // namespace

void SrConfig::validate() const {
    if (step_size <= 0.0) throw std::invalid_argument("dynamics: step_size must be > 0");
    if (regularization < 0.0) throw std::invalid_argument("dynamics: regularization must be >= 0");
    if (samples_per_step < 10) {
        throw std::invalid_argument("dynamics: samples_per_step must be >= 10");
    }
    if (max_steps < 1) throw std::invalid_argument("dynamics: max_steps must be >= 1");
    if (n_chains < 1) throw std::invalid_argument("dynamics: n_chains must be >= 1");
}

SrMatrices sr_matrices(const RbmState& psi, const Hamiltonian& ham, const SampleBatch& batch,
                       int n_threads) {
    if (batch.size() == 0) throw std::invalid_argument("dynamics: empty batch");
    Eigen::MatrixXcd o_mat;
    Eigen::VectorXcd e_loc;
    kernels::observables_batch(psi, ham, batch, o_mat, e_loc, n_threads);
    auto gram = kernels::gram(o_mat, e_loc, n_threads);
    return SrMatrices{std::move(gram.s_cov), std::move(gram.f_force)};
}

TrainResult train_ground_state(const RbmState& psi0, const Hamiltonian& ham,
                               const SrConfig& cfg) {
    cfg.validate();
    constexpr int kPlateauWindow = 50;
    constexpr double kPlateauTol = 1e-6;

    TrainResult res;
    res.state = psi0;
    res.energy_history.reserve(cfg.max_steps);
    for (int step = 0; step < cfg.max_steps; ++step) {
        auto est = sample_and_estimate(res.state, ham, cfg, mix_seed(cfg.seed, kSamplerSalt, step));
        res.energy_history.push_back(est.energy.value.real());

        Eigen::VectorXcd x = solve_regularized(est.gram.s_cov, est.gram.f_force,
                                               cfg.regularization);
        res.state = with_parameters_added(res.state, (-cfg.step_size * x).eval());

        const int k = static_cast<int>(res.energy_history.size());
        if (k > kPlateauWindow) {
            const double now = res.energy_history[k - 1];
            const double then = res.energy_history[k - 1 - kPlateauWindow];
            if (std::abs(now - then) < kPlateauTol * std::max(std::abs(then), 1e-12)) {
                res.converged = true;
                break;
            }
        }
    }
    return res;
}

StepResult evolve_step(const RbmState& psi, const Hamiltonian& ham, const SrConfig& cfg,
                       Direction direction, int step_index, double t_start, double dt_override) {
    cfg.validate();
    const double dt = dt_override > 0.0 ? dt_override : cfg.step_size;
    const double dt_signed = direction == Direction::forward ? dt : -dt;

    auto est = sample_and_estimate(psi, ham, cfg, mix_seed(cfg.seed, kSamplerSalt, step_index));
    Eigen::VectorXcd x = solve_regularized(est.gram.s_cov, est.gram.f_force, cfg.regularization);

    StepResult out;
    out.state = with_parameters_added(psi, (Complex(0.0, -dt_signed) * x).eval());

    // One-sided normalized overlap <psi|psi'> / (|psi||psi'|) on the
    // pre-step batch: mean ratio over mean |ratio|^2.
    Eigen::VectorXcd ratios;
    kernels::ratio_batch(out.state, psi, est.batch, ratios, cfg.n_threads);
    if (!ratios.allFinite()) {
        throw std::runtime_error("dynamics: non-finite overlap ratio during step");
    }
    const Complex v = ratios.mean();
    const double m2 = ratios.squaredNorm() / static_cast<double>(ratios.size());
    const Complex overlap = v / std::sqrt(m2);

    // <psi(t)|psi(t + dt)> = e^{i dphi} (1 - i E dt)
    const Complex truncated = Complex(1.0, 0.0) - Complex(0.0, dt_signed) * est.energy.value;
    const double dphi = wrap_angle(std::arg(overlap) - std::arg(truncated));

    out.record.step = step_index;
    out.record.t = t_start + dt;
    out.record.energy = est.energy.value;
    out.record.energy_err_re = est.energy.err_re;
    out.record.energy_err_im = est.energy.err_im;
    out.record.overlap_before_after = overlap;
    out.record.delta_phi = dphi;
    out.record.accumulated_phi = dphi;  // caller accumulates across steps
    out.record.step_size_warning = std::abs(dphi) >= std::numbers::pi / 2.0;
    if (out.record.step_size_warning) {
        std::cerr << "dynamics: |delta_phi| = " << std::abs(dphi) << " at step " << step_index
                  << "; step size is likely too large\n";
    }
    return out;
}

EvolveResult evolve(const RbmState& psi, const Hamiltonian& ham, double t_final,
                    const SrConfig& cfg, Direction direction) {
    cfg.validate();
    if (t_final < 0.0) throw std::invalid_argument("dynamics: t_final must be >= 0");

    EvolveResult res;
    res.state = psi;
    if (t_final == 0.0) return res;

    const double dt = cfg.step_size;
    const int n_steps = static_cast<int>(std::ceil(t_final / dt - 1e-12));
    double reached = 0.0;
    double phi = 0.0;
    for (int step = 0; step < n_steps; ++step) {
        const double this_dt = std::min(dt, t_final - reached);
        StepResult sr = evolve_step(res.state, ham, cfg, direction, step, reached, this_dt);
        res.state = std::move(sr.state);
        reached = sr.record.t;
        phi += sr.record.delta_phi;
        sr.record.accumulated_phi = phi;
        res.log.steps.push_back(sr.record);
    }
    return res;
}

}  // namespace otoc
