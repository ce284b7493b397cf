#include "otoc/hamiltonian.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace otoc {

TfimHamiltonian::TfimHamiltonian(TfimParams params) : params_(std::move(params)) {
    if (!std::isfinite(params_.h) || !std::isfinite(params_.j)) {
        throw std::invalid_argument("hamiltonian: h and J must be finite");
    }
    if (params_.lattice.n_sites() <= 0 || params_.lattice.bonds.empty()) {
        throw std::invalid_argument("hamiltonian: invalid lattice");
    }
}

Complex TfimHamiltonian::local_energy(const RbmState& psi, const SpinConfig& s,
                                      const ThetaCache& cache) const {
    // Diagonal Ising part is real by construction.
    double ising = 0.0;
    for (const auto& [i, j] : params_.lattice.bonds) {
        ising += static_cast<double>(s[i] * s[j]);
    }
    Complex off = 0.0;
    for (int k = 0; k < n_sites(); ++k) {
        off += amplitude_ratio(psi, s, cache, {&k, 1});
    }
    return -params_.j * ising - params_.h * off;
}

SignedFieldHamiltonian::SignedFieldHamiltonian(std::vector<int> signs)
    : signs_(std::move(signs)) {
    for (int c : signs_) {
        if (c != 1 && c != -1) {
            throw std::invalid_argument("hamiltonian: field signs must be +1 or -1");
        }
    }
}

Complex SignedFieldHamiltonian::local_energy(const RbmState& psi, const SpinConfig& s,
                                             const ThetaCache& cache) const {
    Complex acc = 0.0;
    for (int k = 0; k < n_sites(); ++k) {
        acc += static_cast<double>(signs_[k]) * amplitude_ratio(psi, s, cache, {&k, 1});
    }
    return acc;
}

double EnergyEstimate::std_error() const { return std::hypot(err_re, err_im); }

namespace {

// Standard error of the mean from a set of independent group means.
std::pair<double, double> group_error(const std::vector<Complex>& means, Complex grand) {
    const std::size_t g = means.size();
    if (g < 2) return {0.0, 0.0};
    double var_re = 0.0, var_im = 0.0;
    for (Complex m : means) {
        var_re += (m.real() - grand.real()) * (m.real() - grand.real());
        var_im += (m.imag() - grand.imag()) * (m.imag() - grand.imag());
    }
    const double denom = static_cast<double>(g) * static_cast<double>(g - 1);
    return {std::sqrt(var_re / denom), std::sqrt(var_im / denom)};
}

}  // namespace

EnergyEstimate mean_energy(const Hamiltonian& ham, const RbmState& psi, const SampleBatch& batch,
                           int n_threads) {
    if (batch.size() == 0) throw std::invalid_argument("hamiltonian: empty sample batch");

    Eigen::VectorXcd e_loc(batch.size());
    const int b = batch.size();
    const int threads = n_threads > 0 ? n_threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int i = 0; i < b; ++i) {
        SpinConfig s = batch.config(i);
        ThetaCache cache(psi, s);
        e_loc[i] = ham.local_energy(psi, s, cache);
    }

    // Group by chain; a single chain is split into up to 16 blocks instead.
    int groups = batch.n_chains >= 2 ? batch.n_chains : std::min(16, b);
    std::vector<Complex> means(groups);
    for (int g = 0; g < groups; ++g) {
        const int lo = static_cast<int>(static_cast<long>(b) * g / groups);
        const int hi = static_cast<int>(static_cast<long>(b) * (g + 1) / groups);
        means[g] = e_loc.segment(lo, hi - lo).mean();
    }

    EnergyEstimate est;
    est.value = e_loc.mean();
    auto [er, ei] = group_error(means, est.value);
    est.err_re = er;
    est.err_im = ei;
    return est;
}

}  // namespace otoc
