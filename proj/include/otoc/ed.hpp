#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "otoc/hamiltonian.hpp"
#include "otoc/pauli.hpp"
#include "otoc/rbm.hpp"

namespace otoc {

// Dense state-vector reference for small systems. Basis convention,
// shared with the RBM sampler enumeration: bit k of the basis index holds
// site k under row-major site indexing, and a set bit means s_k = +1.
struct DenseState {
    Eigen::VectorXcd amp;  // length 2^N
    int n_sites = 0;
};

constexpr int kDefaultEdCap = 16;

SpinConfig spin_config_from_index(std::uint64_t index, int n_sites);
std::uint64_t index_from_spin_config(const SpinConfig& s);

// Evaluates exp(log_amplitude) on every basis configuration.
DenseState rbm_to_dense(const RbmState& psi, int cap = kDefaultEdCap);

DenseState apply_pauli_dense(const DenseState& state, PauliOp op);

// Product state of sigma_x eigenstates: site j holds |x = xi_j>.
DenseState x_basis_product_state(const std::vector<int>& xi);

// Exact propagator exp(-iHt) for the TFIM. Uses the full eigendecomposition
// up to 12 sites and a Lanczos (Krylov) exponential above that, both well
// inside 1e-10 of the true evolution.
class DenseEvolver {
public:
    explicit DenseEvolver(const TfimParams& params, int cap = kDefaultEdCap,
                          bool force_krylov = false);

    int n_sites() const { return n_sites_; }
    DenseState evolve(const DenseState& state, double t) const;
    DenseState ground_state() const;
    double ground_energy() const;
    void matvec(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;

private:
    int n_sites_;
    double h_;
    Eigen::VectorXd diag_;  // Ising part per basis state
    bool spectral_;         // eigendecomposition path (N <= 12)
    Eigen::MatrixXd eigvecs_;
    Eigen::VectorXd eigvals_;

    DenseState evolve_krylov(const DenseState& state, double t) const;
};

// F(t) = <Psi2|Psi1> / (|Psi1||Psi2|) with Psi1 = U' V2 U V1 psi0 and
// Psi2 = V1 U' V2 U psi0 (U' the reverse evolution), built exactly.
Complex dense_otoc(const DenseState& psi0, const DenseEvolver& evolver, PauliOp v1, PauliOp v2,
                   double t);

struct DenseThermalResult {
    Complex mean;
    double spread = 0.0;  // standard error of the mean over the ensemble
    std::vector<Complex> values;
};

// Averages dense_otoc over the x-basis product states given by the sign
// vectors (one vector per ensemble member).
DenseThermalResult dense_thermal_otoc(const DenseEvolver& evolver, PauliOp v1, PauliOp v2,
                                      double t, const std::vector<std::vector<int>>& sign_vectors);

}  // namespace otoc
