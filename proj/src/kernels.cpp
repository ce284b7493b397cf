#include "otoc/kernels.hpp"

#include <omp.h>

#include <stdexcept>
#include <vector>

namespace otoc::kernels {

namespace {

int resolve_threads(int n_threads) { return n_threads > 0 ? n_threads : omp_get_max_threads(); }

}  // namespace

void observables_batch(const RbmState& psi, const Hamiltonian& ham, const SampleBatch& batch,
                       Eigen::MatrixXcd& o_mat, Eigen::VectorXcd& e_loc, int n_threads) {
    const int b = batch.size();
    o_mat.resize(psi.n_parameters(), b);
    e_loc.resize(b);
    const int threads = resolve_threads(n_threads);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int i = 0; i < b; ++i) {
        SpinConfig s = batch.config(i);
        ThetaCache cache(psi, s);
        log_derivatives_into(psi, s, cache, o_mat.col(i).data());
        e_loc[i] = ham.local_energy(psi, s, cache);
    }
}

void observables_batch_serial(const RbmState& psi, const Hamiltonian& ham,
                              const SampleBatch& batch, Eigen::MatrixXcd& o_mat,
                              Eigen::VectorXcd& e_loc) {
    const int b = batch.size();
    o_mat.resize(psi.n_parameters(), b);
    e_loc.resize(b);
    for (int i = 0; i < b; ++i) {
        SpinConfig s = batch.config(i);
        ThetaCache cache(psi, s);
        log_derivatives_into(psi, s, cache, o_mat.col(i).data());
        e_loc[i] = ham.local_energy(psi, s, cache);
    }
}

GramResult gram(const Eigen::MatrixXcd& o_mat, const Eigen::VectorXcd& e_loc, int n_threads) {
    const Eigen::Index p = o_mat.rows();
    const Eigen::Index b = o_mat.cols();
    if (b == 0) throw std::invalid_argument("kernels: empty batch in gram");

    const int threads = std::min<Eigen::Index>(resolve_threads(n_threads), b);
    // Per-thread slabs can get large (P^2 complex each); fall back to a
    // single accumulator when that would dominate memory.
    const bool slabbed = threads > 1 && p * p * static_cast<Eigen::Index>(threads) * 16 <
                                            (1LL << 31);

    GramResult res;
    if (slabbed) {
        std::vector<Eigen::MatrixXcd> s_part(threads);
        std::vector<Eigen::VectorXcd> f_part(threads), o_part(threads);
        std::vector<Complex> e_part(threads);
#pragma omp parallel num_threads(threads)
        {
            const int t = omp_get_thread_num();
            const Eigen::Index lo = b * t / threads;
            const Eigen::Index hi = b * (t + 1) / threads;
            auto o_blk = o_mat.middleCols(lo, hi - lo);
            auto e_blk = e_loc.segment(lo, hi - lo);
            s_part[t].noalias() = o_blk.conjugate() * o_blk.transpose();
            f_part[t].noalias() = o_blk.conjugate() * e_blk;
            o_part[t] = o_blk.rowwise().sum();
            e_part[t] = e_blk.sum();
        }
        res.s_cov = s_part[0];
        res.f_force = f_part[0];
        res.o_mean = o_part[0];
        res.e_mean = e_part[0];
        for (int t = 1; t < threads; ++t) {  // fixed merge order
            res.s_cov += s_part[t];
            res.f_force += f_part[t];
            res.o_mean += o_part[t];
            res.e_mean += e_part[t];
        }
    } else {
        res.s_cov.noalias() = o_mat.conjugate() * o_mat.transpose();
        res.f_force.noalias() = o_mat.conjugate() * e_loc;
        res.o_mean = o_mat.rowwise().sum();
        res.e_mean = e_loc.sum();
    }

    const double inv_b = 1.0 / static_cast<double>(b);
    res.s_cov *= inv_b;
    res.f_force *= inv_b;
    res.o_mean *= inv_b;
    res.e_mean *= inv_b;
    res.s_cov.noalias() -= res.o_mean.conjugate() * res.o_mean.transpose();
    res.f_force.noalias() -= res.o_mean.conjugate() * res.e_mean;
    return res;
}

GramResult gram_serial(const Eigen::MatrixXcd& o_mat, const Eigen::VectorXcd& e_loc) {
    const Eigen::Index p = o_mat.rows();
    const Eigen::Index b = o_mat.cols();
    if (b == 0) throw std::invalid_argument("kernels: empty batch in gram");

    GramResult res;
    res.s_cov = Eigen::MatrixXcd::Zero(p, p);
    res.f_force = Eigen::VectorXcd::Zero(p);
    res.o_mean = Eigen::VectorXcd::Zero(p);
    res.e_mean = 0.0;
    for (Eigen::Index i = 0; i < b; ++i) {
        res.o_mean += o_mat.col(i);
        res.e_mean += e_loc[i];
    }
    const double inv_b = 1.0 / static_cast<double>(b);
    res.o_mean *= inv_b;
    res.e_mean *= inv_b;
    for (Eigen::Index i = 0; i < b; ++i) {
        for (Eigen::Index k = 0; k < p; ++k) {
            const Complex ok = std::conj(o_mat(k, i));
            res.f_force[k] += ok * e_loc[i] * inv_b;
            for (Eigen::Index l = 0; l < p; ++l) {
                res.s_cov(k, l) += ok * o_mat(l, i) * inv_b;
            }
        }
    }
    res.s_cov.noalias() -= res.o_mean.conjugate() * res.o_mean.transpose();
    res.f_force.noalias() -= res.o_mean.conjugate() * res.e_mean;
    return res;
}

void tfim_matvec(const Eigen::VectorXd& diag, double h, int n_sites, const Eigen::VectorXcd& x,
                 Eigen::VectorXcd& y, int n_threads) {
    const Eigen::Index dim = x.size();
    y.resize(dim);
    const int threads = resolve_threads(n_threads);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (Eigen::Index n = 0; n < dim; ++n) {
        Complex acc = diag[n] * x[n];
        for (int k = 0; k < n_sites; ++k) {
            acc -= h * x[n ^ (Eigen::Index(1) << k)];
        }
        y[n] = acc;
    }
}

void tfim_matvec_serial(const Eigen::VectorXd& diag, double h, int n_sites,
                        const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
    const Eigen::Index dim = x.size();
    y.resize(dim);
    for (Eigen::Index n = 0; n < dim; ++n) {
        Complex acc = diag[n] * x[n];
        for (int k = 0; k < n_sites; ++k) {
            acc -= h * x[n ^ (Eigen::Index(1) << k)];
        }
        y[n] = acc;
    }
}

void ratio_batch(const RbmState& psi_num, const RbmState& psi_den, const SampleBatch& batch,
                 Eigen::VectorXcd& ratios, int n_threads) {
    const int b = batch.size();
    ratios.resize(b);
    const int threads = resolve_threads(n_threads);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int i = 0; i < b; ++i) {
        SpinConfig s = batch.config(i);
        ratios[i] = std::exp(log_amplitude(psi_num, s) - log_amplitude(psi_den, s));
    }
}

void ratio_batch_serial(const RbmState& psi_num, const RbmState& psi_den,
                        const SampleBatch& batch, Eigen::VectorXcd& ratios) {
    const int b = batch.size();
    ratios.resize(b);
    for (int i = 0; i < b; ++i) {
        SpinConfig s = batch.config(i);
        ratios[i] = std::exp(log_amplitude(psi_num, s) - log_amplitude(psi_den, s));
    }
}

}  // namespace otoc::kernels
