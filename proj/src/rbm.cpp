#include "otoc/rbm.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "otoc/rng.hpp"

namespace otoc {

namespace {

constexpr std::uint32_t kCheckpointVersion = 1;
constexpr char kCheckpointMagic[8] = {'R', 'B', 'M', 'S', 'T', 'A', 'T', 'E'};

void check_site(const RbmState& psi, int site) {
    if (site < 0 || site >= psi.n_visible()) {
        throw std::out_of_range("rbm: site index out of range");
    }
}

void check_dims(const RbmState& psi, const SpinConfig& s) {
    if (s.size() != psi.a.size() || psi.W.rows() != psi.b.size() ||
        psi.W.cols() != psi.a.size()) {
        throw std::invalid_argument("rbm: dimension mismatch between state and configuration");
    }
}

}  // namespace

bool is_spin_config(const SpinConfig& s) {
    for (Eigen::Index j = 0; j < s.size(); ++j) {
        if (s[j] != 1 && s[j] != -1) return false;
    }
    return true;
}

Complex log2cosh(Complex z) {
    // 2 cosh z = e^u (1 + e^{-2u}) with u = z * sign(Re z); |e^{-2u}| <= 1.
    Complex u = (z.real() < 0.0) ? -z : z;
    return u + std::log(1.0 + std::exp(-2.0 * u));
}

bool RbmState::is_finite() const {
    return a.allFinite() && b.allFinite() && W.allFinite();
}

RbmState random_init(int n_visible, int n_hidden, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) throw std::invalid_argument("rbm: sigma must be >= 0");
    RbmState psi;
    psi.a.resize(n_visible);
    psi.b.resize(n_hidden);
    psi.W.resize(n_hidden, n_visible);
    Rng rng(seed);
    auto draw = [&] { double re = sigma * rng.normal(); double im = sigma * rng.normal();
                      return Complex(re, im); };
    for (int j = 0; j < n_visible; ++j) psi.a[j] = draw();
    for (int i = 0; i < n_hidden; ++i) psi.b[i] = draw();
    for (int i = 0; i < n_hidden; ++i)
        for (int j = 0; j < n_visible; ++j) psi.W(i, j) = draw();
    return psi;
}

void ThetaCache::refresh(const RbmState& psi, const SpinConfig& s) {
    check_dims(psi, s);
    theta = psi.b + psi.W * s.cast<Complex>();
}

void ThetaCache::apply_flip(const RbmState& psi, const SpinConfig& s, int site) {
    theta -= 2.0 * static_cast<double>(s[site]) * psi.W.col(site);
}

Complex log_amplitude(const RbmState& psi, const SpinConfig& s) {
    ThetaCache cache(psi, s);
    return log_amplitude(psi, s, cache);
}

Complex log_amplitude(const RbmState& psi, const SpinConfig& s, const ThetaCache& cache) {
    check_dims(psi, s);
    Complex visible = psi.a.cwiseProduct(s.cast<Complex>()).sum();  // sum_j a_j s_j
    Complex hidden = 0.0;
    for (Eigen::Index i = 0; i < cache.theta.size(); ++i) {
        hidden += log2cosh(cache.theta[i]);
    }
    return visible + hidden;
}

Complex log_amplitude_ratio(const RbmState& psi, const SpinConfig& s, const ThetaCache& cache,
                            std::span<const int> flip_sites) {
    Complex delta = 0.0;
    if (flip_sites.empty()) return delta;
    // theta'_i = theta_i - 2 sum_{k in flips} W_ik s_k
    Eigen::VectorXcd theta_new = cache.theta;
    for (int k : flip_sites) {
        check_site(psi, k);
        delta -= 2.0 * static_cast<double>(s[k]) * psi.a[k];
        theta_new -= 2.0 * static_cast<double>(s[k]) * psi.W.col(k);
    }
    for (Eigen::Index i = 0; i < theta_new.size(); ++i) {
        delta += log2cosh(theta_new[i]) - log2cosh(cache.theta[i]);
    }
    return delta;
}

Complex amplitude_ratio(const RbmState& psi, const SpinConfig& s, const ThetaCache& cache,
                        std::span<const int> flip_sites) {
    if (flip_sites.empty()) return Complex(1.0, 0.0);
    return std::exp(log_amplitude_ratio(psi, s, cache, flip_sites));
}

void log_derivatives_into(const RbmState& psi, const SpinConfig& s, const ThetaCache& cache,
                          Complex* out) {
    const int n = psi.n_visible();
    const int m = psi.n_hidden();
    for (int j = 0; j < n; ++j) out[j] = static_cast<double>(s[j]);
    for (int i = 0; i < m; ++i) out[n + i] = std::tanh(cache.theta[i]);
    for (int i = 0; i < m; ++i) {
        const Complex th = out[n + i];
        Complex* row = out + n + m + static_cast<std::ptrdiff_t>(i) * n;
        for (int j = 0; j < n; ++j) row[j] = th * static_cast<double>(s[j]);
    }
}

Eigen::VectorXcd log_derivatives(const RbmState& psi, const SpinConfig& s,
                                 const ThetaCache& cache) {
    check_dims(psi, s);
    Eigen::VectorXcd out(psi.n_parameters());
    log_derivatives_into(psi, s, cache, out.data());
    return out;
}

RbmState with_parameters_added(const RbmState& psi, const Eigen::VectorXcd& delta) {
    if (delta.size() != psi.n_parameters()) {
        throw std::invalid_argument("rbm: parameter delta has wrong length");
    }
    const int n = psi.n_visible();
    const int m = psi.n_hidden();
    RbmState out = psi;
    out.a += delta.head(n);
    out.b += delta.segment(n, m);
    for (int i = 0; i < m; ++i) {
        out.W.row(i) += delta.segment(n + m + i * n, n).transpose();
    }
    return out;
}

RbmState apply_sigma_x(RbmState psi, int site) {
    check_site(psi, site);
    psi.a[site] = -psi.a[site];
    psi.W.col(site) = -psi.W.col(site);
    return psi;
}

RbmState apply_sigma_z(RbmState psi, int site) {
    check_site(psi, site);
    psi.a[site] += Complex(0.0, std::numbers::pi / 2.0);
    return psi;
}

RbmState apply_sigma_y(RbmState psi, int site) {
    return apply_sigma_x(apply_sigma_z(std::move(psi), site), site);
}

RbmState append_decoupled_hidden(const RbmState& psi, Complex b_extra) {
    RbmState out = psi;
    const int m = psi.n_hidden();
    out.b.conservativeResize(m + 1);
    out.b[m] = b_extra;
    out.W.conservativeResize(m + 1, Eigen::NoChange);
    out.W.row(m).setZero();
    return out;
}

void save_checkpoint(const RbmState& psi, std::uint64_t seed, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("rbm: cannot open checkpoint for writing: " + path);
    std::uint64_t n = static_cast<std::uint64_t>(psi.n_visible());
    std::uint64_t m = static_cast<std::uint64_t>(psi.n_hidden());
    f.write(kCheckpointMagic, sizeof(kCheckpointMagic));
    f.write(reinterpret_cast<const char*>(&kCheckpointVersion), sizeof(kCheckpointVersion));
    f.write(reinterpret_cast<const char*>(&n), sizeof(n));
    f.write(reinterpret_cast<const char*>(&m), sizeof(m));
    f.write(reinterpret_cast<const char*>(&seed), sizeof(seed));
    auto write_array = [&](const Complex* data, std::size_t count) {
        f.write(reinterpret_cast<const char*>(data),
                static_cast<std::streamsize>(count * sizeof(Complex)));
    };
    write_array(psi.a.data(), n);
    write_array(psi.b.data(), m);
    write_array(psi.W.data(), n * m);
    if (!f) throw std::runtime_error("rbm: checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("rbm: cannot open checkpoint: " + path);
    char magic[8];
    std::uint32_t version = 0;
    std::uint64_t n = 0, m = 0, seed = 0;
    f.read(magic, sizeof(magic));
    f.read(reinterpret_cast<char*>(&version), sizeof(version));
    if (!f || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0) {
        throw std::runtime_error("rbm: not a checkpoint file: " + path);
    }
    if (version != kCheckpointVersion) {
        throw std::runtime_error("rbm: unsupported checkpoint version in " + path);
    }
    f.read(reinterpret_cast<char*>(&n), sizeof(n));
    f.read(reinterpret_cast<char*>(&m), sizeof(m));
    f.read(reinterpret_cast<char*>(&seed), sizeof(seed));
    Checkpoint ck;
    ck.seed = seed;
    ck.state.a.resize(static_cast<Eigen::Index>(n));
    ck.state.b.resize(static_cast<Eigen::Index>(m));
    ck.state.W.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    auto read_array = [&](Complex* data, std::size_t count) {
        f.read(reinterpret_cast<char*>(data),
               static_cast<std::streamsize>(count * sizeof(Complex)));
    };
    read_array(ck.state.a.data(), n);
    read_array(ck.state.b.data(), m);
    read_array(ck.state.W.data(), n * m);
    if (!f) throw std::runtime_error("rbm: truncated checkpoint: " + path);
    return ck;
}

}  // namespace otoc
