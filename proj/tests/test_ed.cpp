#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>

#include "oracles.hpp"
#include "otoc/ed.hpp"
#include "otoc/io.hpp"
#include "otoc/lattice.hpp"

using namespace otoc;
using doctest::Approx;

namespace {

TfimParams make_params(int rows, int cols, double h, double j) {
    return TfimParams{h, j, build_lattice(rows, cols)};
}

}  // namespace

TEST_CASE("basis convention: bit k set means spin +1 on site k") {
    SpinConfig s = spin_config_from_index(0b0101, 4);
    CHECK(s[0] == 1);
    CHECK(s[1] == -1);
    CHECK(s[2] == 1);
    CHECK(s[3] == -1);
    CHECK(index_from_spin_config(s) == 0b0101);
    for (std::uint64_t idx = 0; idx < 32; ++idx) {
        CHECK(index_from_spin_config(spin_config_from_index(idx, 5)) == idx);
    }
}

TEST_CASE("rbm_to_dense") {
    SUBCASE("uniform parameters give the constant vector 2^M") {
        RbmState flat = random_init(3, 4, 0.0, 1);
        DenseState d = rbm_to_dense(flat);
        for (Eigen::Index i = 0; i < d.amp.size(); ++i) {
            CHECK(std::abs(d.amp[i] - Complex(16.0, 0.0)) < 1e-12);
        }
    }
    SUBCASE("single site with no hidden units") {
        RbmState psi;
        psi.a.resize(1);
        psi.a << Complex(0.3, 0.0);
        psi.b.resize(0);
        psi.W.resize(0, 1);
        DenseState d = rbm_to_dense(psi);
        CHECK(std::abs(d.amp[0] - std::exp(Complex(-0.3))) < 1e-14);
        CHECK(std::abs(d.amp[1] - std::exp(Complex(0.3))) < 1e-14);
    }
    SUBCASE("random state matches the hidden-spin enumeration") {
        RbmState psi = oracles::random_rbm(4, 6, 0.3, 9);
        DenseState d = rbm_to_dense(psi);
        Eigen::VectorXcd want = oracles::enumerate_amplitudes(psi);
        CHECK((d.amp - want).norm() < 1e-10 * want.norm());
    }
    SUBCASE("cap is enforced") {
        RbmState psi = oracles::random_rbm(5, 5, 0.1, 2);
        CHECK_THROWS_AS(rbm_to_dense(psi, 4), std::invalid_argument);
    }
}

TEST_CASE("dense evolution") {
    TfimParams p = make_params(2, 2, 1.0, 1.0);
    DenseEvolver evolver(p);
    RbmState psi = oracles::random_rbm(4, 8, 0.2, 3);
    DenseState d0 = rbm_to_dense(psi);

    SUBCASE("t = 0 is the identity") {
        DenseState d = evolver.evolve(d0, 0.0);
        CHECK((d.amp - d0.amp).norm() == 0.0);
    }
    SUBCASE("unitarity and reversibility") {
        DenseState fwd = evolver.evolve(d0, 0.7);
        CHECK(fwd.amp.norm() == Approx(d0.amp.norm()).epsilon(1e-10));
        DenseState back = evolver.evolve(fwd, -0.7);
        CHECK((back.amp - d0.amp).norm() < 1e-9 * d0.amp.norm());
    }
    SUBCASE("J = 0 factorizes into exact single-site rotations") {
        TfimParams free = make_params(2, 2, 0.8, 0.0);
        DenseEvolver fe(free);
        const double t = 0.37;
        DenseState got = fe.evolve(d0, t);
        // apply cos(ht) I + i sin(ht) sigma_x per site
        Eigen::VectorXcd want = d0.amp;
        for (int k = 0; k < 4; ++k) {
            Eigen::VectorXcd next(want.size());
            for (Eigen::Index n = 0; n < want.size(); ++n) {
                next[n] = std::cos(0.8 * t) * want[n] +
                          Complex(0, 1) * std::sin(0.8 * t) * want[n ^ (Eigen::Index(1) << k)];
            }
            want = next;
        }
        CHECK((got.amp - want).norm() < 1e-10 * want.norm());
    }
    SUBCASE("krylov path agrees with the spectral path") {
        TfimParams p25 = make_params(2, 5, 1.0, 1.0);
        DenseEvolver spectral(p25);
        DenseEvolver krylov(p25, kDefaultEdCap, true);
        RbmState psi10 = oracles::random_rbm(10, 10, 0.15, 5);
        DenseState d = rbm_to_dense(psi10);
        for (double t : {0.2, 1.5}) {
            DenseState a = spectral.evolve(d, t);
            DenseState b = krylov.evolve(d, t);
            CHECK((a.amp - b.amp).norm() < 1e-9 * a.amp.norm());
        }
        CHECK(spectral.ground_energy() == Approx(krylov.ground_energy()).epsilon(1e-9));
    }
}

TEST_CASE("dense pauli operators against 2x2 matrix algebra") {
    RbmState psi = oracles::random_rbm(3, 3, 0.25, 7);
    DenseState d = rbm_to_dense(psi);
    for (int site = 0; site < 3; ++site) {
        for (char name : {'x', 'y', 'z'}) {
            PauliOp op{pauli_from_name(std::string(1, name)), site};
            DenseState got = apply_pauli_dense(d, op);
            Eigen::VectorXcd want = oracles::dense_pauli(d.amp, 3, name, site);
            CHECK((got.amp - want).norm() < 1e-13 * d.amp.norm());
        }
    }
}

TEST_CASE("dense otoc at t = 0 equals the Pauli-pair algebra") {
    TfimParams p = make_params(2, 2, 1.0, 1.0);
    DenseEvolver evolver(p);
    RbmState psi = oracles::random_rbm(4, 8, 0.2, 11);
    DenseState d = rbm_to_dense(psi);
    const Pauli all[] = {Pauli::x, Pauli::y, Pauli::z};
    for (Pauli a : all) {
        for (Pauli b : all) {
            // same site: +1 when equal, -1 when different; distinct sites: +1
            const Complex same = dense_otoc(d, evolver, {a, 1}, {b, 1}, 0.0);
            CHECK(std::abs(same - Complex(a == b ? 1.0 : -1.0)) < 1e-12);
            const Complex far = dense_otoc(d, evolver, {a, 0}, {b, 3}, 0.0);
            CHECK(std::abs(far - Complex(1.0)) < 1e-12);
        }
    }
}

TEST_CASE("ground state of the evolver") {
    TfimParams p = make_params(2, 3, 3.05, 1.0);
    DenseEvolver evolver(p);
    DenseState gs = evolver.ground_state();
    Eigen::VectorXcd hgs;
    evolver.matvec(gs.amp, hgs);
    const double e0 = evolver.ground_energy();
    CHECK((hgs - e0 * gs.amp).norm() < 1e-8);

    // independent dense check
    const Eigen::Index dim = 64;
    Eigen::MatrixXd ham = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index n = 0; n < dim; ++n) {
        double ising = 0.0;
        for (const auto& [i, j] : p.lattice.bonds) {
            ising += ((n >> i) & 1 ? 1.0 : -1.0) * ((n >> j) & 1 ? 1.0 : -1.0);
        }
        ham(n, n) = -p.j * ising;
        for (int k = 0; k < 6; ++k) ham(n, n ^ (Eigen::Index(1) << k)) += -p.h;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ham);
    CHECK(e0 == Approx(eig.eigenvalues()[0]).epsilon(1e-10));
}

TEST_CASE("x-basis product states") {
    SUBCASE("all +1 is the uniform superposition") {
        DenseState d = x_basis_product_state({1, 1, 1});
        for (Eigen::Index i = 0; i < 8; ++i) {
            CHECK(std::abs(d.amp[i] - Complex(1.0 / std::sqrt(8.0))) < 1e-14);
        }
    }
    SUBCASE("sigma_x expectation per site equals the sign") {
        const std::vector<int> xi = {1, -1, -1, 1};
        DenseState d = x_basis_product_state(xi);
        for (int k = 0; k < 4; ++k) {
            DenseState flipped = apply_pauli_dense(d, {Pauli::x, k});
            const double expect = d.amp.dot(flipped.amp).real();
            CHECK(expect == Approx(xi[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("dense thermal average") {
    TfimParams p = make_params(2, 2, 1.0, 1.0);
    DenseEvolver evolver(p);
    PauliOp v1{Pauli::x, 0}, v2{Pauli::y, 1};

    SUBCASE("single member equals the plain otoc") {
        const std::vector<std::vector<int>> one = {{1, -1, 1, 1}};
        DenseThermalResult r = dense_thermal_otoc(evolver, v1, v2, 0.3, one);
        const Complex want = dense_otoc(x_basis_product_state(one[0]), evolver, v1, v2, 0.3);
        CHECK(std::abs(r.mean - want) < 1e-13);
        CHECK(r.spread == 0.0);
    }
    SUBCASE("full-basis average at t = 0 for commuting operators is one") {
        std::vector<std::vector<int>> all;
        for (int bits = 0; bits < 16; ++bits) {
            std::vector<int> xi(4);
            for (int k = 0; k < 4; ++k) xi[k] = (bits >> k) & 1 ? 1 : -1;
            all.push_back(xi);
        }
        DenseThermalResult r = dense_thermal_otoc(evolver, {Pauli::x, 0}, {Pauli::y, 3}, 0.0, all);
        CHECK(std::abs(r.mean - Complex(1.0)) < 1e-12);
        CHECK(r.spread < 1e-12);
    }
}

TEST_CASE("frozen reference curve for the 3x4 uniform superposition") {
    // The fixture was generated by the spectral path; recomputing it through
    // the Krylov propagator cross-checks the two code paths at N = 12.
    const char* fixture_env = std::getenv("OTOC_FIXTURES_DIR");
    const std::string dir = fixture_env ? fixture_env : "fixtures";
    const std::string path = dir + "/regression_ed_3x4_uniform.tsv";
    if (!std::filesystem::exists(path)) {
        MESSAGE("fixture ", path, " not present; skipping");
        return;
    }
    OtocCurve frozen = read_curve(path);
    TfimParams p = make_params(3, 4, 1.0, 1.0);
    DenseEvolver evolver(p, kDefaultEdCap, true);
    RbmState flat = random_init(12, 1, 0.0, 1);
    DenseState d0 = rbm_to_dense(flat);
    for (const auto& pt : frozen.points) {
        const Complex got = dense_otoc(d0, evolver, frozen.meta.v1, frozen.meta.v2, pt.t);
        CHECK(std::abs(got - pt.f) < 1e-8);
    }
}
