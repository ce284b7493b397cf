#include "otoc/overlap.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "otoc/kernels.hpp"
#include "otoc/rng.hpp"

namespace otoc {

namespace {

struct SideEstimate {
    Complex mean;
    std::vector<Complex> group_means;
    double variance = 0.0;  // complex (isotropic) variance of the mean
};

SideEstimate one_side(const RbmState& psi_sampled, const RbmState& psi_other,
                      const SamplerConfig& cfg, int n_threads) {
    SampleBatch batch = sample(psi_sampled, cfg, n_threads);
    Eigen::VectorXcd ratios;
    kernels::ratio_batch(psi_other, psi_sampled, batch, ratios, n_threads);
    if (!ratios.allFinite()) {
        throw std::runtime_error(
            "overlap: amplitude ratio overflowed; states look disjoint and the "
            "estimate would be unreliable");
    }

    SideEstimate est;
    est.mean = ratios.mean();
    const int b = batch.size();
    const int groups = batch.n_chains >= 2 ? batch.n_chains : std::min(8, b);
    est.group_means.resize(groups);
    for (int g = 0; g < groups; ++g) {
        const int lo = static_cast<int>(static_cast<long>(b) * g / groups);
        const int hi = static_cast<int>(static_cast<long>(b) * (g + 1) / groups);
        est.group_means[g] = ratios.segment(lo, hi - lo).mean();
    }
    double var = 0.0;
    for (Complex m : est.group_means) var += std::norm(m - est.mean);
    est.variance = var / (static_cast<double>(groups) * std::max(groups - 1, 1));
    return est;
}

Complex combine(Complex v1, Complex v2, double w1, double w2) {
    const double mag = std::sqrt(std::abs(v1) * std::abs(v2));
    const double phi1 = std::arg(std::conj(v1));
    const double phi2 = std::arg(v2);
    const Complex dir = w1 * std::polar(1.0, phi1) + w2 * std::polar(1.0, phi2);
    return std::polar(mag, std::arg(dir));
}

// Delete-1 mean over equally weighted groups.
Complex delete_one(const std::vector<Complex>& means, Complex grand, int drop) {
    const auto g = static_cast<double>(means.size());
    if (means.size() < 2) return grand;
    return (grand * g - means[drop]) / (g - 1.0);
}

}  // namespace

OverlapEstimate overlap(const RbmState& psi1, const RbmState& psi2, const SamplerConfig& cfg,
                        int n_threads) {
    if (psi1.n_visible() != psi2.n_visible()) {
        throw std::invalid_argument("overlap: states act on different site counts");
    }

    SamplerConfig cfg1 = cfg;
    cfg1.seed = mix_seed(cfg.seed, 1);
    SamplerConfig cfg2 = cfg;
    cfg2.seed = mix_seed(cfg.seed, 2);
    SideEstimate side1 = one_side(psi1, psi2, cfg1, n_threads);
    SideEstimate side2 = one_side(psi2, psi1, cfg2, n_threads);

    if (std::abs(side1.mean) == 0.0 || std::abs(side2.mean) == 0.0) {
        throw std::runtime_error("overlap: zero ratio mean; phase is undefined");
    }

    // Phase weights: inverse variance of the per-side phase estimate.
    const double pvar1 = side1.variance / std::norm(side1.mean);
    const double pvar2 = side2.variance / std::norm(side2.mean);
    const double w1 = 1.0 / std::max(pvar1, 1e-300);
    const double w2 = 1.0 / std::max(pvar2, 1e-300);

    OverlapEstimate est;
    est.v1 = side1.mean;
    est.v2 = side2.mean;
    est.value = combine(side1.mean, side2.mean, w1, w2);

    // Jackknife the full combination over each side's groups; the sides
    // are independent runs, so the variances add.
    double var = 0.0;
    for (int side = 0; side < 2; ++side) {
        const auto& groups = side == 0 ? side1.group_means : side2.group_means;
        const auto g = static_cast<double>(groups.size());
        if (groups.size() < 2) continue;
        std::vector<Complex> reduced(groups.size());
        Complex mean_reduced = 0.0;
        for (std::size_t c = 0; c < groups.size(); ++c) {
            const Complex vc = delete_one(groups, side == 0 ? side1.mean : side2.mean,
                                          static_cast<int>(c));
            reduced[c] = side == 0 ? combine(vc, side2.mean, w1, w2)
                                   : combine(side1.mean, vc, w1, w2);
            mean_reduced += reduced[c];
        }
        mean_reduced /= g;
        double acc = 0.0;
        for (Complex r : reduced) acc += std::norm(r - mean_reduced);
        var += acc * (g - 1.0) / g;
    }
    est.std_error = std::sqrt(var);
    return est;
}

}  // namespace otoc
