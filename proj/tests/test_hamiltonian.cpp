#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "otoc/hamiltonian.hpp"
#include "otoc/lattice.hpp"
#include "otoc/sampler.hpp"

using namespace otoc;
using oracles::config_from_bits;
using doctest::Approx;

namespace {

TfimParams make_params(int rows, int cols, double h, double j) {
    return TfimParams{h, j, build_lattice(rows, cols)};
}

// Dense <S|H|Psi> / <S|Psi> from the enumerated amplitude vector.
Complex dense_local_energy(const TfimParams& p, const Eigen::VectorXcd& amp,
                           std::uint64_t index) {
    const int n = p.lattice.n_sites();
    Complex acc = 0.0;
    double ising = 0.0;
    for (const auto& [i, j] : p.lattice.bonds) {
        const double si = (index >> i) & 1 ? 1.0 : -1.0;
        const double sj = (index >> j) & 1 ? 1.0 : -1.0;
        ising += si * sj;
    }
    acc = -p.j * ising * amp[static_cast<Eigen::Index>(index)];
    for (int k = 0; k < n; ++k) {
        acc -= p.h * amp[static_cast<Eigen::Index>(index ^ (std::uint64_t(1) << k))];
    }
    return acc / amp[static_cast<Eigen::Index>(index)];
}

}  // namespace

TEST_CASE("local energy closed forms") {
    SUBCASE("h=0, all spins up on 3x3") {
        TfimHamiltonian ham(make_params(3, 3, 0.0, 1.5));
        RbmState psi = oracles::random_rbm(9, 9, 0.2, 1);
        SpinConfig s = SpinConfig::Ones(9);
        ThetaCache cache(psi, s);
        CHECK(ham.local_energy(psi, s, cache).real() == Approx(-18.0 * 1.5).epsilon(1e-12));
        CHECK(ham.local_energy(psi, s, cache).imag() == Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("J=0 on the uniform state gives -hN") {
        TfimHamiltonian ham(make_params(2, 3, 0.7, 0.0));
        RbmState flat = random_init(6, 6, 0.0, 1);
        SpinConfig s = config_from_bits(0b010110, 6);
        ThetaCache cache(flat, s);
        CHECK(std::abs(ham.local_energy(flat, s, cache) - Complex(-0.7 * 6.0)) < 1e-12);
    }
    SUBCASE("random state on 2x3 matches the dense matrix element") {
        TfimParams p = make_params(2, 3, 0.9, 1.1);
        TfimHamiltonian ham(p);
        RbmState psi = oracles::random_rbm(6, 9, 0.3, 17);
        Eigen::VectorXcd amp = oracles::enumerate_amplitudes(psi);
        for (std::uint64_t idx : {0ull, 7ull, 21ull, 63ull, 40ull}) {
            SpinConfig s = config_from_bits(idx, 6);
            ThetaCache cache(psi, s);
            const Complex want = dense_local_energy(p, amp, idx);
            CHECK(std::abs(ham.local_energy(psi, s, cache) - want) <
                  1e-10 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("exact expectation identity over the full basis") {
    // sum |Psi|^2 E_loc / sum |Psi|^2 equals <Psi|H|Psi>/<Psi|Psi>.
    for (auto [rows, cols] : {std::pair{2, 2}, {2, 3}}) {
        TfimParams p = make_params(rows, cols, 1.3, 0.8);
        TfimHamiltonian ham(p);
        const int n = p.lattice.n_sites();
        RbmState psi = oracles::random_rbm(n, 2 * n, 0.25, 29);
        Eigen::VectorXcd amp = oracles::enumerate_amplitudes(psi);

        Complex weighted = 0.0;
        double norm = 0.0;
        Complex dense = 0.0;
        for (std::uint64_t idx = 0; idx < (std::uint64_t(1) << n); ++idx) {
            SpinConfig s = config_from_bits(idx, n);
            ThetaCache cache(psi, s);
            const double w = std::norm(amp[static_cast<Eigen::Index>(idx)]);
            weighted += w * ham.local_energy(psi, s, cache);
            norm += w;
            dense += std::conj(amp[static_cast<Eigen::Index>(idx)]) *
                     dense_local_energy(p, amp, idx) * amp[static_cast<Eigen::Index>(idx)];
        }
        weighted /= norm;
        dense /= norm;
        CHECK(std::abs(weighted - dense) < 1e-10 * std::abs(dense));
        CHECK(std::abs(weighted.imag()) < 1e-10);  // Hermitian H, exact average
    }
}

TEST_CASE("mean energy estimates") {
    SUBCASE("uniform state, J=0: every local energy is exactly -hN") {
        TfimHamiltonian ham(make_params(2, 3, 1.0, 0.0));
        RbmState flat = random_init(6, 12, 0.0, 1);
        SamplerConfig cfg;
        cfg.n_chains = 4;
        cfg.n_sweeps = 300;
        cfg.seed = 21;
        SampleBatch batch = sample(flat, cfg);
        EnergyEstimate est = mean_energy(ham, flat, batch);
        CHECK(est.value.real() == Approx(-6.0).epsilon(1e-12));
        CHECK(est.err_re == Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("strongly polarized state at h=0 sits at the bond minimum") {
        TfimParams p = make_params(3, 3, 0.0, 1.0);
        TfimHamiltonian ham(p);
        RbmState psi = random_init(9, 9, 0.0, 1);
        psi.a.setConstant(Complex(3.0, 0.0));  // concentrates |Psi|^2 on all-up
        SamplerConfig cfg;
        cfg.n_chains = 2;
        cfg.n_sweeps = 2000;
        cfg.burn_in_sweeps = 200;
        cfg.seed = 23;
        SampleBatch batch = sample(psi, cfg);
        EnergyEstimate est = mean_energy(ham, psi, batch);
        CHECK(est.value.real() == Approx(-18.0).epsilon(1e-6));
    }
    SUBCASE("imaginary part is statistically zero") {
        TfimHamiltonian ham(make_params(2, 3, 1.0, 1.0));
        RbmState psi = oracles::random_rbm(6, 12, 0.25, 31);
        SamplerConfig cfg;
        cfg.n_chains = 8;
        cfg.n_sweeps = 12500;
        cfg.seed = 37;
        SampleBatch batch = sample(psi, cfg);
        EnergyEstimate est = mean_energy(ham, psi, batch);
        CHECK(std::abs(est.value.imag()) <= 4.0 * est.err_im + 1e-9);
    }
    SUBCASE("empty batch rejected") {
        TfimHamiltonian ham(make_params(2, 2, 1.0, 1.0));
        RbmState psi = oracles::random_rbm(4, 4, 0.1, 3);
        SampleBatch empty;
        empty.configs.resize(4, 0);
        CHECK_THROWS_AS(mean_energy(ham, psi, empty), std::invalid_argument);
    }
}

TEST_CASE("signed transverse field model") {
    SignedFieldHamiltonian ham({1, -1, 1, 1});
    SUBCASE("uniform state gives the plain sign sum") {
        RbmState flat = random_init(4, 4, 0.0, 1);
        SpinConfig s = config_from_bits(0b1010, 4);
        ThetaCache cache(flat, s);
        CHECK(std::abs(ham.local_energy(flat, s, cache) - Complex(2.0)) < 1e-12);
    }
    SUBCASE("signs are validated") {
        CHECK_THROWS_AS(SignedFieldHamiltonian({1, 0, 1}), std::invalid_argument);
    }
}
