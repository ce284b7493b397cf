#include "otoc/sampler.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>

#include "otoc/rng.hpp"

namespace otoc {

namespace {

// Full theta rebuilds are cheap relative to this interval and bound the
// incremental-update round-off drift.
constexpr int kCacheRefreshInterval = 10000;

struct ChainResult {
    long accepted = 0;
    long proposed = 0;
};

ChainResult run_chain(const RbmState& psi, const SamplerConfig& cfg, int chain,
                      Eigen::Ref<Eigen::MatrixXi> out) {
    const int n = psi.n_visible();
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(chain)));

    SpinConfig s(n);
    for (int j = 0; j < n; ++j) s[j] = rng.pm_one();
    ThetaCache cache(psi, s);

    ChainResult res;
    const int total_sweeps = cfg.burn_in_sweeps + cfg.n_sweeps;
    int retained = 0;
    for (int sweep = 0; sweep < total_sweeps; ++sweep) {
        if (sweep > 0 && sweep % kCacheRefreshInterval == 0) cache.refresh(psi, s);
        const bool measuring = sweep >= cfg.burn_in_sweeps;
        for (int k = 0; k < n; ++k) {
            const int site = rng.below(n);
            const Complex dlog = log_amplitude_ratio(psi, s, cache, {&site, 1});
            if (!std::isfinite(dlog.real()) || !std::isfinite(dlog.imag())) {
                throw std::runtime_error(
                    "sampler: non-finite amplitude ratio encountered (degenerate state)");
            }
            // accept with min(1, |ratio|^2); compare in log domain so huge
            // ratios never overflow
            const double log_u = std::log(1.0 - rng.uniform());
            if (log_u < 2.0 * dlog.real()) {
                cache.apply_flip(psi, s, site);
                s[site] = -s[site];
                if (measuring) ++res.accepted;
            }
            if (measuring) ++res.proposed;
        }
        if (measuring && (sweep - cfg.burn_in_sweeps) % cfg.thinning == 0) {
            out.col(retained++) = s;
        }
    }
    return res;
}

}  // namespace

void SamplerConfig::validate() const {
    if (n_chains < 1) throw std::invalid_argument("sampler: n_chains must be >= 1");
    if (n_sweeps < 1) throw std::invalid_argument("sampler: n_sweeps must be >= 1");
    if (thinning < 1) throw std::invalid_argument("sampler: thinning must be >= 1");
    if (burn_in_sweeps < 0) throw std::invalid_argument("sampler: burn_in must be >= 0");
}

int SamplerConfig::samples_per_chain() const {
    return (n_sweeps + thinning - 1) / thinning;
}

SampleBatch sample(const RbmState& psi, const SamplerConfig& cfg, int n_threads) {
    cfg.validate();
    if (!psi.is_finite()) throw std::invalid_argument("sampler: state has non-finite parameters");

    const int per_chain = cfg.samples_per_chain();
    SampleBatch batch;
    batch.n_chains = cfg.n_chains;
    batch.configs.resize(psi.n_visible(), static_cast<Eigen::Index>(per_chain) * cfg.n_chains);

    std::vector<ChainResult> results(cfg.n_chains);
    const int threads = n_threads > 0 ? n_threads : omp_get_max_threads();
    std::exception_ptr err;
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int c = 0; c < cfg.n_chains; ++c) {
        try {
            results[c] =
                run_chain(psi, cfg, c, batch.configs.middleCols(c * per_chain, per_chain));
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);

    long accepted = 0, proposed = 0;
    for (const auto& r : results) {
        accepted += r.accepted;
        proposed += r.proposed;
    }
    batch.acceptance_rate = proposed > 0 ? static_cast<double>(accepted) / proposed : 0.0;
    return batch;
}

SampleBatch sample_serial(const RbmState& psi, const SamplerConfig& cfg) {
    cfg.validate();
    if (!psi.is_finite()) throw std::invalid_argument("sampler: state has non-finite parameters");

    const int per_chain = cfg.samples_per_chain();
    SampleBatch batch;
    batch.n_chains = cfg.n_chains;
    batch.configs.resize(psi.n_visible(), static_cast<Eigen::Index>(per_chain) * cfg.n_chains);

    long accepted = 0, proposed = 0;
    for (int c = 0; c < cfg.n_chains; ++c) {
        ChainResult r = run_chain(psi, cfg, c, batch.configs.middleCols(c * per_chain, per_chain));
        accepted += r.accepted;
        proposed += r.proposed;
    }
    batch.acceptance_rate = proposed > 0 ? static_cast<double>(accepted) / proposed : 0.0;
    return batch;
}

}  // namespace otoc
