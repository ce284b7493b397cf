#include "otoc/ed.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "otoc/kernels.hpp"

namespace otoc {

namespace {

constexpr int kSpectralLimit = 12;     // eigendecomposition up to here
constexpr double kKrylovTol = 1e-12;

void check_cap(int n_sites, int cap) {
    if (n_sites > cap) {
        throw std::invalid_argument("ed: " + std::to_string(n_sites) +
                                    " sites exceeds the oracle cap of " + std::to_string(cap));
    }
    if (n_sites < 1 || n_sites > 30) {
        throw std::invalid_argument("ed: unsupported site count");
    }
}

int spin_at(std::uint64_t index, int site) { return (index >> site) & 1 ? 1 : -1; }

Eigen::VectorXd ising_diagonal(const TfimParams& params) {
    const int n = params.lattice.n_sites();
    const std::uint64_t dim = std::uint64_t(1) << n;
    Eigen::VectorXd diag(static_cast<Eigen::Index>(dim));
    for (std::uint64_t idx = 0; idx < dim; ++idx) {
        double acc = 0.0;
        for (const auto& [i, j] : params.lattice.bonds) {
            acc += static_cast<double>(spin_at(idx, i) * spin_at(idx, j));
        }
        diag[static_cast<Eigen::Index>(idx)] = -params.j * acc;
    }
    return diag;
}

}  // namespace

SpinConfig spin_config_from_index(std::uint64_t index, int n_sites) {
    SpinConfig s(n_sites);
    for (int k = 0; k < n_sites; ++k) s[k] = spin_at(index, k);
    return s;
}

std::uint64_t index_from_spin_config(const SpinConfig& s) {
    std::uint64_t idx = 0;
    for (int k = 0; k < s.size(); ++k) {
        if (s[k] == 1) idx |= std::uint64_t(1) << k;
    }
    return idx;
}

DenseState rbm_to_dense(const RbmState& psi, int cap) {
    check_cap(psi.n_visible(), cap);
    const int n = psi.n_visible();
    const std::uint64_t dim = std::uint64_t(1) << n;
    DenseState out;
    out.n_sites = n;
    out.amp.resize(static_cast<Eigen::Index>(dim));
    for (std::uint64_t idx = 0; idx < dim; ++idx) {
        out.amp[static_cast<Eigen::Index>(idx)] =
            std::exp(log_amplitude(psi, spin_config_from_index(idx, n)));
    }
    return out;
}

DenseState apply_pauli_dense(const DenseState& state, PauliOp op) {
    const std::uint64_t dim = static_cast<std::uint64_t>(state.amp.size());
    if (op.site < 0 || op.site >= state.n_sites) {
        throw std::out_of_range("ed: pauli site out of range");
    }
    const std::uint64_t bit = std::uint64_t(1) << op.site;
    DenseState out;
    out.n_sites = state.n_sites;
    out.amp.resize(state.amp.size());
    for (std::uint64_t n = 0; n < dim; ++n) {
        const auto i = static_cast<Eigen::Index>(n);
        const auto flipped = static_cast<Eigen::Index>(n ^ bit);
        const double s = spin_at(n, op.site);
        switch (op.pauli) {
            case Pauli::x: out.amp[i] = state.amp[flipped]; break;
            case Pauli::z: out.amp[i] = s * state.amp[i]; break;
            case Pauli::y: out.amp[i] = Complex(0.0, -s) * state.amp[flipped]; break;
        }
    }
    return out;
}

DenseState x_basis_product_state(const std::vector<int>& xi) {
    const int n = static_cast<int>(xi.size());
    const std::uint64_t dim = std::uint64_t(1) << n;
    DenseState out;
    out.n_sites = n;
    out.amp.resize(static_cast<Eigen::Index>(dim));
    const double norm = std::pow(2.0, -0.5 * n);
    for (std::uint64_t idx = 0; idx < dim; ++idx) {
        // |x=+1> has equal amplitudes; |x=-1> flips the sign on s_j = -1.
        double sign = 1.0;
        for (int j = 0; j < n; ++j) {
            if (spin_at(idx, j) == -1 && xi[j] == -1) sign = -sign;
        }
        out.amp[static_cast<Eigen::Index>(idx)] = sign * norm;
    }
    return out;
}

DenseEvolver::DenseEvolver(const TfimParams& params, int cap, bool force_krylov)
    : n_sites_(params.lattice.n_sites()), h_(params.h) {
    check_cap(n_sites_, cap);
    diag_ = ising_diagonal(params);
    spectral_ = n_sites_ <= kSpectralLimit && !force_krylov;
    if (spectral_) {
        const Eigen::Index dim = diag_.size();
        Eigen::MatrixXd ham = Eigen::MatrixXd::Zero(dim, dim);
        for (Eigen::Index n = 0; n < dim; ++n) {
            ham(n, n) = diag_[n];
            for (int k = 0; k < n_sites_; ++k) {
                ham(n, n ^ (Eigen::Index(1) << k)) = -h_;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(ham);
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("ed: eigendecomposition failed");
        }
        eigvals_ = solver.eigenvalues();
        eigvecs_ = solver.eigenvectors();
    }
}

void DenseEvolver::matvec(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
    kernels::tfim_matvec(diag_, h_, n_sites_, x, y);
}

DenseState DenseEvolver::evolve(const DenseState& state, double t) const {
    if (state.n_sites != n_sites_) throw std::invalid_argument("ed: state/evolver size mismatch");
    if (t == 0.0) return state;
    if (!spectral_) return evolve_krylov(state, t);

    // psi(t) = Q exp(-i t Lambda) Q^T psi
    Eigen::VectorXcd coeffs = eigvecs_.transpose() * state.amp;
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
        coeffs[k] *= std::exp(Complex(0.0, -t * eigvals_[k]));
    }
    DenseState out;
    out.n_sites = n_sites_;
    out.amp = eigvecs_ * coeffs;
    return out;
}

DenseState DenseEvolver::evolve_krylov(const DenseState& state, double t) const {
    // Lanczos exponential with full reorthogonalization, applied over
    // substeps short enough that the Krylov space converges to kKrylovTol.
    const Eigen::Index dim = state.amp.size();
    const double hnorm = diag_.cwiseAbs().maxCoeff() + std::abs(h_) * n_sites_;
    const int substeps = std::max(1, static_cast<int>(std::ceil(std::abs(t) * hnorm / 8.0)));
    const double dt = t / substeps;
    const int m_max = 90;

    DenseState out = state;
    Eigen::MatrixXcd basis(dim, m_max);
    Eigen::VectorXd alpha(m_max), beta(m_max);
    Eigen::VectorXcd w(dim);

    for (int step = 0; step < substeps; ++step) {
        const double norm0 = out.amp.norm();
        if (norm0 == 0.0) return out;
        basis.col(0) = out.amp / norm0;
        int m = 0;
        bool happy = false;
        for (m = 0; m < m_max; ++m) {
            matvec(basis.col(m), w);
            alpha[m] = basis.col(m).dot(w).real();
            w -= alpha[m] * basis.col(m);
            if (m > 0) w -= beta[m - 1] * basis.col(m - 1);
            for (int r = 0; r <= m; ++r) {  // full reorthogonalization
                w -= basis.col(r).dot(w) * basis.col(r);
            }
            beta[m] = w.norm();
            if (beta[m] < 1e-14 * hnorm) {
                ++m;
                happy = true;
                break;
            }
            if (m + 1 < m_max) basis.col(m + 1) = w / beta[m];
        }

        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
        for (int r = 0; r < m; ++r) {
            tri(r, r) = alpha[r];
            if (r + 1 < m) tri(r, r + 1) = tri(r + 1, r) = beta[r];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(tri);
        Eigen::VectorXcd phases(m);
        for (int r = 0; r < m; ++r) {
            phases[r] = std::exp(Complex(0.0, -dt * small.eigenvalues()[r]));
        }
        // exp(-i dt T) e_1 in the Lanczos basis
        Eigen::VectorXd first_row = small.eigenvectors().row(0);
        Eigen::VectorXcd expte1(m);
        for (int r = 0; r < m; ++r) {
            Complex acc = 0.0;
            for (int q = 0; q < m; ++q) {
                acc += small.eigenvectors()(r, q) * phases[q] * first_row[q];
            }
            expte1[r] = acc;
        }
        if (!happy) {
            const double tail = std::abs(expte1[m - 1]) * beta[m - 1] * std::abs(dt);
            if (tail > kKrylovTol) {
                throw std::runtime_error("ed: Krylov exponential did not converge");
            }
        }
        out.amp = norm0 * (basis.leftCols(m) * expte1);
    }
    return out;
}

DenseState DenseEvolver::ground_state() const {
    DenseState out;
    out.n_sites = n_sites_;
    if (spectral_) {
        out.amp = eigvecs_.col(0).cast<Complex>();
        return out;
    }
    // Lanczos lowest eigenpair for the Krylov path.
    const Eigen::Index dim = diag_.size();
    const int m_max = 200;
    Eigen::MatrixXcd basis(dim, m_max);
    Eigen::VectorXd alpha(m_max), beta(m_max);
    Eigen::VectorXcd w(dim);
    basis.col(0) = Eigen::VectorXcd::Constant(dim, 1.0 / std::sqrt(double(dim)));
    int m = 0;
    for (m = 0; m < m_max; ++m) {
        matvec(basis.col(m), w);
        alpha[m] = basis.col(m).dot(w).real();
        w -= alpha[m] * basis.col(m);
        if (m > 0) w -= beta[m - 1] * basis.col(m - 1);
        for (int r = 0; r <= m; ++r) w -= basis.col(r).dot(w) * basis.col(r);
        beta[m] = w.norm();
        if (beta[m] < 1e-13) {
            ++m;
            break;
        }
        if (m + 1 < m_max) basis.col(m + 1) = w / beta[m];
    }
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int r = 0; r < m; ++r) {
        tri(r, r) = alpha[r];
        if (r + 1 < m) tri(r, r + 1) = tri(r + 1, r) = beta[r];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(tri);
    out.amp = basis.leftCols(m) * small.eigenvectors().col(0).cast<Complex>();
    out.amp.normalize();
    return out;
}

double DenseEvolver::ground_energy() const {
    if (spectral_) return eigvals_[0];
    DenseState gs = ground_state();
    Eigen::VectorXcd hgs;
    matvec(gs.amp, hgs);
    return gs.amp.dot(hgs).real() / gs.amp.squaredNorm();
}

Complex dense_otoc(const DenseState& psi0, const DenseEvolver& evolver, PauliOp v1, PauliOp v2,
                   double t) {
    DenseState branch1 = apply_pauli_dense(psi0, v1);
    branch1 = evolver.evolve(branch1, t);
    branch1 = apply_pauli_dense(branch1, v2);
    branch1 = evolver.evolve(branch1, -t);

    DenseState branch2 = evolver.evolve(psi0, t);
    branch2 = apply_pauli_dense(branch2, v2);
    branch2 = evolver.evolve(branch2, -t);
    branch2 = apply_pauli_dense(branch2, v1);

    return branch2.amp.dot(branch1.amp) / (branch1.amp.norm() * branch2.amp.norm());
}

DenseThermalResult dense_thermal_otoc(const DenseEvolver& evolver, PauliOp v1, PauliOp v2,
                                      double t,
                                      const std::vector<std::vector<int>>& sign_vectors) {
    if (sign_vectors.empty()) throw std::invalid_argument("ed: empty thermal ensemble");
    DenseThermalResult res;
    res.values.reserve(sign_vectors.size());
    Complex acc = 0.0;
    for (const auto& xi : sign_vectors) {
        DenseState state = x_basis_product_state(xi);
        Complex f = dense_otoc(state, evolver, v1, v2, t);
        res.values.push_back(f);
        acc += f;
    }
    const auto s = static_cast<double>(sign_vectors.size());
    res.mean = acc / s;
    if (sign_vectors.size() > 1) {
        double var = 0.0;
        for (Complex f : res.values) var += std::norm(f - res.mean);
        res.spread = std::sqrt(var / (s * (s - 1.0)));
    }
    return res;
}

}  // namespace otoc
