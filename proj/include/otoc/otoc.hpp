#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otoc/dynamics.hpp"
#include "otoc/hamiltonian.hpp"
#include "otoc/overlap.hpp"
#include "otoc/pauli.hpp"
#include "otoc/rbm.hpp"

namespace otoc {

struct PhaseLogEntry {
    std::string context;  // e.g. "point03/branch1/bwd"
    PhaseLog log;
};

struct PhaseLogBook {
    std::vector<PhaseLogEntry> entries;
};

struct OtocSettings {
    SrConfig dynamics;              // seed is re-derived per segment
    SamplerConfig overlap_sampler;  // seed is re-derived per time point
    int n_threads = 0;
    PhaseLogBook* log_book = nullptr;  // optional audit trail of every segment
    std::string log_prefix;
};

struct CurveMetadata {
    int rows = 0, cols = 0;
    double h = 1.0, j = 1.0;
    PauliOp v1, v2;
    std::string initial_kind;  // random | ground | thermal | exact
    std::string source;        // rbm | ed
    std::uint64_t seed = 0;
    double alpha = 2.0;   // hidden-unit density M/N
    double sigma = 0.0;   // initialization width
    int ensemble_size = 0;
};

struct OtocPoint {
    double t = 0.0;
    Complex f;
    double err = 0.0;
    double phase_correction = 0.0;  // radians applied to remove evolution phases
};

struct OtocCurve {
    CurveMetadata meta;
    std::vector<OtocPoint> points;
};

// F(t) = <Psi2|Psi1> for Psi1 = U' V2 U V1 psi0 and Psi2 = V1 U' V2 U psi0
// (U' reverses the evolution), with each branch's accumulated global phase
// removed: F <- F_raw * exp(i (phi2 - phi1)). The Pauli rules are exact or
// share the same constant between the branches, so no other phase survives.
// Forward segments extend incrementally across the (strictly increasing)
// time grid; every backward segment is evolved per time point.
OtocCurve compute_otoc_pure(const RbmState& psi0, const TfimHamiltonian& ham, PauliOp v1,
                            PauliOp v2, const std::vector<double>& times,
                            const OtocSettings& settings, std::uint64_t seed);

struct GroundOtocResult {
    OtocCurve curve;
    RbmState trained_state;
    std::vector<double> training_energy;
};

// Trains the initial state toward the ground state of `ham`, then runs the
// pure-state pipeline.
GroundOtocResult compute_otoc_ground(const TfimHamiltonian& ham, PauliOp v1, PauliOp v2,
                                     const std::vector<double>& times, const SrConfig& training,
                                     const OtocSettings& settings, double alpha, double sigma,
                                     std::uint64_t seed);

struct ThermalOtocResult {
    OtocCurve mean_curve;                      // pointwise ensemble mean, err = SEM
    std::vector<OtocCurve> member_curves;
    std::vector<std::vector<int>> sign_vectors;  // x-basis configuration per member
    std::vector<double> training_energies;
    std::vector<int> flagged_members;          // training ended > 1% above -N
};

// The x-basis configurations used by a thermal run with this seed; the
// exact-oracle comparison draws the same ensemble from here.
std::vector<std::vector<int>> thermal_sign_vectors(int n_sites, int ensemble_size,
                                                   std::uint64_t seed);

// Infinite-temperature ensemble: s random x-basis configurations, each
// prepared by training toward the ground state of sum_i c_i sigma_x^i from
// a small random start, then averaged pointwise. Error bars are the
// standard error of the mean over the realizations.
ThermalOtocResult compute_otoc_thermal(const TfimHamiltonian& ham, PauliOp v1, PauliOp v2,
                                       const std::vector<double>& times, int ensemble_size,
                                       const SrConfig& training, const OtocSettings& settings,
                                       double alpha, double sigma, std::uint64_t seed);

}  // namespace otoc
