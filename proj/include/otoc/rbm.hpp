#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <span>
#include <string>

namespace otoc {

using Complex = std::complex<double>;

// Spin configuration in the sigma_z basis; every entry is +1 or -1.
using SpinConfig = Eigen::VectorXi;

bool is_spin_config(const SpinConfig& s);

// ln(2 cosh z), overflow-safe for large |Re z|. The principal branch is
// taken per evaluation; callers only ever exponentiate differences of
// these values, so a 2*pi*i branch jump is harmless.
Complex log2cosh(Complex z);

// Complex RBM wavefunction over N spins with M hidden units:
//   Psi(S) = exp(sum_j a_j s_j) * prod_i 2 cosh(b_i + sum_j W_ij s_j)
// States are unnormalized; all estimators downstream are ratio-based.
struct RbmState {
    Eigen::VectorXcd a;  // visible biases, length N
    Eigen::VectorXcd b;  // hidden biases, length M
    Eigen::MatrixXcd W;  // couplings, M x N (row = hidden unit)

    int n_visible() const { return static_cast<int>(a.size()); }
    int n_hidden() const { return static_cast<int>(b.size()); }
    int n_parameters() const { return n_visible() + n_hidden() + n_visible() * n_hidden(); }
    bool is_finite() const;
};

// Every real and imaginary part drawn independently from N(0, sigma^2);
// deterministic for a fixed seed.
RbmState random_init(int n_visible, int n_hidden, double sigma, std::uint64_t seed);

// Cached hidden-unit arguments theta_i = b_i + sum_j W_ij s_j for one
// (state, configuration) pair; updated in O(M) per spin flip.
struct ThetaCache {
    Eigen::VectorXcd theta;

    ThetaCache() = default;
    ThetaCache(const RbmState& psi, const SpinConfig& s) { refresh(psi, s); }
    void refresh(const RbmState& psi, const SpinConfig& s);
    // Updates theta for a flip of `site`, where s is the configuration
    // *before* the flip.
    void apply_flip(const RbmState& psi, const SpinConfig& s, int site);
};

Complex log_amplitude(const RbmState& psi, const SpinConfig& s);
Complex log_amplitude(const RbmState& psi, const SpinConfig& s, const ThetaCache& cache);

// ln[Psi(S')/Psi(S)] where S' is S with the given sites flipped; O(M * |flips|).
Complex log_amplitude_ratio(const RbmState& psi, const SpinConfig& s, const ThetaCache& cache,
                            std::span<const int> flip_sites);

// Psi(S')/Psi(S) for the flipped configuration.
Complex amplitude_ratio(const RbmState& psi, const SpinConfig& s, const ThetaCache& cache,
                        std::span<const int> flip_sites);

// Variational derivatives O_k = d ln Psi / d p_k in the flattened
// parameter order a_0..a_{N-1}, b_0..b_{M-1}, then W row-major
// (W_00, W_01, ..., W_0,N-1, W_10, ...):
//   d/da_j = s_j,  d/db_i = tanh theta_i,  d/dW_ij = tanh(theta_i) s_j.
Eigen::VectorXcd log_derivatives(const RbmState& psi, const SpinConfig& s,
                                 const ThetaCache& cache);
void log_derivatives_into(const RbmState& psi, const SpinConfig& s, const ThetaCache& cache,
                          Complex* out);

// Returns the state's parameters shifted by `delta` (same flattened order).
RbmState with_parameters_added(const RbmState& psi, const Eigen::VectorXcd& delta);

// Exact single-site Pauli action as a parameter update.
//   sigma_x: a_k -> -a_k, W_:k -> -W_:k            (Psi' = sigma_x Psi, exact)
//   sigma_z: a_k -> a_k + i pi/2                   (Psi' = i sigma_z Psi)
//   sigma_y: sigma_z update then sigma_x update    (Psi' = sigma_y Psi, exact,
//            since sigma_y = i sigma_x sigma_z and the i is supplied by the
//            sigma_z rule)
RbmState apply_sigma_x(RbmState psi, int site);
RbmState apply_sigma_z(RbmState psi, int site);
RbmState apply_sigma_y(RbmState psi, int site);

// Appends one hidden unit with zero couplings: multiplies every amplitude
// by 2 cosh(b_extra) and must leave all ratio-based estimators unchanged.
RbmState append_decoupled_hidden(const RbmState& psi, Complex b_extra);

// Checkpoint container: binary, versioned, bit-exact round trip.
struct Checkpoint {
    RbmState state;
    std::uint64_t seed = 0;
};

void save_checkpoint(const RbmState& psi, std::uint64_t seed, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace otoc
