#include "otoc/otoc.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>

#include "otoc/rng.hpp"

namespace otoc {

namespace {

// Seed salts for the independent random streams of one curve.
constexpr std::uint64_t kForward1 = 0xA1, kBackward1 = 0xA2;
constexpr std::uint64_t kForward2 = 0xB1, kBackward2 = 0xB2;
constexpr std::uint64_t kOverlap = 0xC1;
constexpr std::uint64_t kMemberSigns = 0xD1, kMemberInit = 0xD2, kMemberTrain = 0xD3,
                        kMemberCurve = 0xD4;
constexpr std::uint64_t kGroundInit = 0xE1, kGroundTrain = 0xE2;

void validate_times(const std::vector<double>& times) {
    if (times.empty()) throw std::invalid_argument("otoc: empty time grid");
    if (times.front() < 0.0) throw std::invalid_argument("otoc: times must be >= 0");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] <= times[i - 1]) {
            throw std::invalid_argument("otoc: time grid must be strictly increasing");
        }
    }
}

void validate_ops(const TfimHamiltonian& ham, PauliOp v1, PauliOp v2) {
    const int n = ham.n_sites();
    if (v1.site < 0 || v1.site >= n || v2.site < 0 || v2.site >= n) {
        throw std::invalid_argument("otoc: operator site outside the lattice");
    }
}

std::string point_tag(std::size_t j) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "point%02zu", j);
    return buf;
}

void record_log(const OtocSettings& settings, std::string context, PhaseLog log) {
    if (settings.log_book == nullptr || log.steps.empty()) return;
    settings.log_book->entries.push_back(
        PhaseLogEntry{settings.log_prefix + std::move(context), std::move(log)});
}

CurveMetadata make_metadata(const TfimHamiltonian& ham, PauliOp v1, PauliOp v2,
                            std::uint64_t seed) {
    CurveMetadata meta;
    meta.rows = ham.params().lattice.rows;
    meta.cols = ham.params().lattice.cols;
    meta.h = ham.params().h;
    meta.j = ham.params().j;
    meta.v1 = v1;
    meta.v2 = v2;
    meta.seed = seed;
    meta.source = "rbm";
    return meta;
}

}  // namespace

OtocCurve compute_otoc_pure(const RbmState& psi0, const TfimHamiltonian& ham, PauliOp v1,
                            PauliOp v2, const std::vector<double>& times,
                            const OtocSettings& settings, std::uint64_t seed) {
    validate_times(times);
    validate_ops(ham, v1, v2);
    if (psi0.n_visible() != ham.n_sites()) {
        throw std::invalid_argument("otoc: state size does not match the lattice");
    }

    OtocCurve curve;
    curve.meta = make_metadata(ham, v1, v2, seed);
    curve.meta.initial_kind = "random";
    curve.points.reserve(times.size());

    // Branch 1 forward carries V1 |psi0>, branch 2 forward carries |psi0>.
    RbmState fwd1 = apply_pauli(psi0, v1);
    RbmState fwd2 = psi0;
    double phi1_fwd = 0.0, phi2_fwd = 0.0;
    double t_reached = 0.0;

    for (std::size_t jdx = 0; jdx < times.size(); ++jdx) {
        const double t = times[jdx];
        const double advance = t - t_reached;
        if (advance > 0.0) {
            SrConfig cfg = settings.dynamics;
            cfg.n_threads = settings.n_threads;
            cfg.seed = mix_seed(seed, kForward1, jdx);
            EvolveResult r1 = evolve(fwd1, ham, advance, cfg, Direction::forward);
            fwd1 = std::move(r1.state);
            phi1_fwd += r1.log.total_phase();
            record_log(settings, point_tag(jdx) + "/branch1/fwd", std::move(r1.log));

            cfg.seed = mix_seed(seed, kForward2, jdx);
            EvolveResult r2 = evolve(fwd2, ham, advance, cfg, Direction::forward);
            fwd2 = std::move(r2.state);
            phi2_fwd += r2.log.total_phase();
            record_log(settings, point_tag(jdx) + "/branch2/fwd", std::move(r2.log));
            t_reached = t;
        }

        // |Psi1> = U' V2 (U V1 psi0)
        SrConfig cfg = settings.dynamics;
        cfg.n_threads = settings.n_threads;
        cfg.seed = mix_seed(seed, kBackward1, jdx);
        EvolveResult b1 = evolve(apply_pauli(fwd1, v2), ham, t, cfg, Direction::backward);
        const double phi1 = phi1_fwd + b1.log.total_phase();
        record_log(settings, point_tag(jdx) + "/branch1/bwd", b1.log);

        // |Psi2> = V1 U' V2 (U psi0)
        cfg.seed = mix_seed(seed, kBackward2, jdx);
        EvolveResult b2 = evolve(apply_pauli(fwd2, v2), ham, t, cfg, Direction::backward);
        RbmState psi2 = apply_pauli(b2.state, v1);
        const double phi2 = phi2_fwd + b2.log.total_phase();
        record_log(settings, point_tag(jdx) + "/branch2/bwd", b2.log);

        SamplerConfig ocfg = settings.overlap_sampler;
        ocfg.seed = mix_seed(seed, kOverlap, jdx);
        OverlapEstimate est = overlap(b1.state, psi2, ocfg, settings.n_threads);

        OtocPoint point;
        point.t = t;
        point.phase_correction = phi2 - phi1;
        point.f = est.value * std::polar(1.0, point.phase_correction);
        point.err = est.std_error;
        curve.points.push_back(point);
    }
    return curve;
}

GroundOtocResult compute_otoc_ground(const TfimHamiltonian& ham, PauliOp v1, PauliOp v2,
                                     const std::vector<double>& times, const SrConfig& training,
                                     const OtocSettings& settings, double alpha, double sigma,
                                     std::uint64_t seed) {
    const int n = ham.n_sites();
    const int m = std::max(1, static_cast<int>(std::lround(alpha * n)));
    RbmState psi_init = random_init(n, m, sigma, mix_seed(seed, kGroundInit));

    SrConfig tcfg = training;
    tcfg.seed = mix_seed(seed, kGroundTrain);
    tcfg.n_threads = settings.n_threads;
    TrainResult trained = train_ground_state(psi_init, ham, tcfg);

    GroundOtocResult res;
    res.curve = compute_otoc_pure(trained.state, ham, v1, v2, times, settings, seed);
    res.curve.meta.initial_kind = "ground";
    res.curve.meta.alpha = alpha;
    res.curve.meta.sigma = sigma;
    res.trained_state = std::move(trained.state);
    res.training_energy = std::move(trained.energy_history);
    return res;
}

std::vector<std::vector<int>> thermal_sign_vectors(int n_sites, int ensemble_size,
                                                   std::uint64_t seed) {
    std::vector<std::vector<int>> out;
    out.reserve(ensemble_size);
    for (int member = 0; member < ensemble_size; ++member) {
        Rng rng(mix_seed(mix_seed(seed, 0xEE, member), kMemberSigns));
        std::vector<int> xi(n_sites);
        for (int jdx = 0; jdx < n_sites; ++jdx) xi[jdx] = rng.pm_one();
        out.push_back(std::move(xi));
    }
    return out;
}

ThermalOtocResult compute_otoc_thermal(const TfimHamiltonian& ham, PauliOp v1, PauliOp v2,
                                       const std::vector<double>& times, int ensemble_size,
                                       const SrConfig& training, const OtocSettings& settings,
                                       double alpha, double sigma, std::uint64_t seed) {
    if (ensemble_size < 2) throw std::invalid_argument("otoc: ensemble size must be >= 2");
    validate_times(times);

    const int n = ham.n_sites();
    const int m = std::max(1, static_cast<int>(std::lround(alpha * n)));
    const auto signs = thermal_sign_vectors(n, ensemble_size, seed);

    ThermalOtocResult res;
    res.member_curves.reserve(ensemble_size);
    for (int member = 0; member < ensemble_size; ++member) {
        const std::uint64_t mseed = mix_seed(seed, 0xEE, member);

        // xi_j is the target sigma_x eigenvalue on site j; the training
        // Hamiltonian sum_i (-xi_i) sigma_x^i has that product state as its
        // ground state with energy -N.
        const std::vector<int>& xi = signs[member];
        std::vector<int> field(n);
        for (int jdx = 0; jdx < n; ++jdx) field[jdx] = -xi[jdx];
        SignedFieldHamiltonian prep(field);

        RbmState psi_init = random_init(n, m, sigma, mix_seed(mseed, kMemberInit));
        SrConfig tcfg = training;
        tcfg.seed = mix_seed(mseed, kMemberTrain);
        tcfg.n_threads = settings.n_threads;
        TrainResult trained = train_ground_state(psi_init, prep, tcfg);

        const double final_energy =
            trained.energy_history.empty() ? 0.0 : trained.energy_history.back();
        res.training_energies.push_back(final_energy);
        if (final_energy > -static_cast<double>(n) * 0.99) {
            res.flagged_members.push_back(member);
        }

        OtocSettings member_settings = settings;
        if (settings.log_book != nullptr) {
            char tag[32];
            std::snprintf(tag, sizeof(tag), "member%02d/", member);
            member_settings.log_prefix = settings.log_prefix + tag;
        }
        OtocCurve curve = compute_otoc_pure(trained.state, ham, v1, v2, times, member_settings,
                                            mix_seed(mseed, kMemberCurve));
        curve.meta.initial_kind = "thermal";
        curve.meta.alpha = alpha;
        curve.meta.sigma = sigma;
        res.sign_vectors.push_back(xi);
        res.member_curves.push_back(std::move(curve));
    }

    // Pointwise ensemble mean; error bars from the spread of the member
    // values (standard error of the mean).
    res.mean_curve.meta = res.member_curves.front().meta;
    res.mean_curve.meta.seed = seed;
    res.mean_curve.meta.ensemble_size = ensemble_size;
    const auto s = static_cast<double>(ensemble_size);
    for (std::size_t p = 0; p < times.size(); ++p) {
        Complex mean = 0.0;
        for (const auto& c : res.member_curves) mean += c.points[p].f;
        mean /= s;
        double var = 0.0;
        for (const auto& c : res.member_curves) var += std::norm(c.points[p].f - mean);
        OtocPoint point;
        point.t = times[p];
        point.f = mean;
        point.err = std::sqrt(var / (s * (s - 1.0)));
        res.mean_curve.points.push_back(point);
    }
    return res;
}

}  // namespace otoc
