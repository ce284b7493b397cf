#pragma once

#include <Eigen/Dense>

#include "otoc/hamiltonian.hpp"
#include "otoc/rbm.hpp"
#include "otoc/sampler.hpp"

namespace otoc::kernels {

// Data-parallel inner loops. Each kernel comes in an OpenMP flavor and a
// plain serial reference used by the tests and the benchmark target.
//
// Samples and dense basis states are independent work items, so those
// kernels give identical results for any thread count. The Gram kernel
// partitions samples into per-thread slabs merged in thread order; its
// result depends (at round-off level) on the worker count, which is why
// runs record the resolved worker count alongside the seeds.

// Log-derivative matrix O (P x B, one column per sample) and local
// energies E (length B).
void observables_batch(const RbmState& psi, const Hamiltonian& ham, const SampleBatch& batch,
                       Eigen::MatrixXcd& o_mat, Eigen::VectorXcd& e_loc, int n_threads = 0);
void observables_batch_serial(const RbmState& psi, const Hamiltonian& ham,
                              const SampleBatch& batch, Eigen::MatrixXcd& o_mat,
                              Eigen::VectorXcd& e_loc);

// Connected covariance matrix and force vector:
//   S_kk' = <O_k^* O_k'> - <O_k^*><O_k'>
//   F_k   = <O_k^* E>    - <O_k^*><E>
struct GramResult {
    Eigen::MatrixXcd s_cov;
    Eigen::VectorXcd f_force;
    Eigen::VectorXcd o_mean;
    Complex e_mean;
};

GramResult gram(const Eigen::MatrixXcd& o_mat, const Eigen::VectorXcd& e_loc, int n_threads = 0);
GramResult gram_serial(const Eigen::MatrixXcd& o_mat, const Eigen::VectorXcd& e_loc);

// y = H x for the TFIM over the full 2^N basis (bit k of the index holds
// site k; set bit = spin +1). `diag` is the precomputed Ising part.
void tfim_matvec(const Eigen::VectorXd& diag, double h, int n_sites, const Eigen::VectorXcd& x,
                 Eigen::VectorXcd& y, int n_threads = 0);
void tfim_matvec_serial(const Eigen::VectorXd& diag, double h, int n_sites,
                        const Eigen::VectorXcd& x, Eigen::VectorXcd& y);

// Amplitude ratios Psi_num(S_i)/Psi_den(S_i) over a batch.
void ratio_batch(const RbmState& psi_num, const RbmState& psi_den, const SampleBatch& batch,
                 Eigen::VectorXcd& ratios, int n_threads = 0);
void ratio_batch_serial(const RbmState& psi_num, const RbmState& psi_den,
                        const SampleBatch& batch, Eigen::VectorXcd& ratios);

}  // namespace otoc::kernels
