#pragma once

#include <vector>

#include "otoc/lattice.hpp"
#include "otoc/rbm.hpp"
#include "otoc/sampler.hpp"

namespace otoc {

struct TfimParams {
    double h = 1.0;  // transverse field (x direction)
    double j = 1.0;  // Ising coupling (z direction)
    Lattice lattice;
};

// Local-energy model E_loc(S) = <S|H|Psi> / <S|Psi>. The dynamics engine
// couples to Hamiltonians only through this interface.
class Hamiltonian {
public:
    virtual ~Hamiltonian() = default;
    virtual int n_sites() const = 0;
    virtual Complex local_energy(const RbmState& psi, const SpinConfig& s,
                                 const ThetaCache& cache) const = 0;
};

// H = -h sum_i sigma_x^i - J sum_<i,j> sigma_z^i sigma_z^j on the torus,
// bonds iterated once from the deduplicated lattice list.
class TfimHamiltonian final : public Hamiltonian {
public:
    explicit TfimHamiltonian(TfimParams params);
    int n_sites() const override { return params_.lattice.n_sites(); }
    Complex local_energy(const RbmState& psi, const SpinConfig& s,
                         const ThetaCache& cache) const override;
    const TfimParams& params() const { return params_; }

private:
    TfimParams params_;
};

// H = sum_i c_i sigma_x^i with c_i in {-1, +1}; its ground state is the
// x-basis product state with sigma_x eigenvalue -c_i on each site
// (energy -N). Used to prepare near-product initial states.
class SignedFieldHamiltonian final : public Hamiltonian {
public:
    explicit SignedFieldHamiltonian(std::vector<int> signs);
    int n_sites() const override { return static_cast<int>(signs_.size()); }
    Complex local_energy(const RbmState& psi, const SpinConfig& s,
                         const ThetaCache& cache) const override;
    const std::vector<int>& signs() const { return signs_; }

private:
    std::vector<int> signs_;
};

struct EnergyEstimate {
    Complex value;
    double err_re = 0.0;
    double err_im = 0.0;

    double std_error() const;
};

// Sample mean of the local energy with a chain-wise standard error
// (single-chain batches fall back to block means). The imaginary part is
// reported as-is; for Hermitian H it must be statistically zero.
EnergyEstimate mean_energy(const Hamiltonian& ham, const RbmState& psi, const SampleBatch& batch,
                           int n_threads = 0);

}  // namespace otoc
