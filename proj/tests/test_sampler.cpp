#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "oracles.hpp"
#include "otoc/sampler.hpp"

using namespace otoc;
using oracles::config_from_bits;

namespace {

// Exact |Psi(S)|^2 distribution by enumeration.
std::vector<double> exact_probabilities(const RbmState& psi) {
    const int n = psi.n_visible();
    std::vector<double> p(std::size_t(1) << n);
    double total = 0.0;
    std::vector<double> logw(p.size());
    double max_log = -1e300;
    for (std::uint64_t idx = 0; idx < p.size(); ++idx) {
        logw[idx] = 2.0 * log_amplitude(psi, config_from_bits(idx, n)).real();
        max_log = std::max(max_log, logw[idx]);
    }
    for (std::uint64_t idx = 0; idx < p.size(); ++idx) {
        p[idx] = std::exp(logw[idx] - max_log);
        total += p[idx];
    }
    for (double& v : p) v /= total;
    return p;
}

double total_variation(const RbmState& psi, const SampleBatch& batch) {
    const auto probs = exact_probabilities(psi);
    std::vector<double> freq(probs.size(), 0.0);
    for (int i = 0; i < batch.size(); ++i) {
        std::uint64_t idx = 0;
        for (int k = 0; k < batch.configs.rows(); ++k) {
            if (batch.configs(k, i) == 1) idx |= std::uint64_t(1) << k;
        }
        freq[idx] += 1.0 / batch.size();
    }
    double tv = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) tv += std::abs(freq[i] - probs[i]);
    return 0.5 * tv;
}

}  // namespace

TEST_CASE("uniform state accepts every proposal") {
    RbmState flat = random_init(6, 12, 0.0, 1);
    SamplerConfig cfg;
    cfg.n_chains = 2;
    cfg.n_sweeps = 500;
    cfg.seed = 3;
    SampleBatch batch = sample(flat, cfg);
    CHECK(batch.acceptance_rate == 1.0);
    CHECK(batch.size() == 1000);

    // per-site magnetization is 0 within 4 standard errors
    for (int k = 0; k < 6; ++k) {
        double mean = 0.0;
        for (int i = 0; i < batch.size(); ++i) mean += batch.configs(k, i);
        mean /= batch.size();
        CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(batch.size())));
    }
}

TEST_CASE("empirical distribution matches |Psi|^2 on N=6") {
    RbmState psi = oracles::random_rbm(6, 12, 0.25, 2024);
    SamplerConfig cfg;
    cfg.n_chains = 4;
    cfg.n_sweeps = 250000;
    cfg.burn_in_sweeps = 200;
    cfg.seed = 5;
    SampleBatch batch = sample(psi, cfg);
    CHECK(total_variation(psi, batch) <= 0.02);
}

TEST_CASE("stationarity holds across seeds on a smaller system") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        RbmState psi = oracles::random_rbm(4, 8, 0.3, 100 + seed);
        SamplerConfig cfg;
        cfg.n_chains = 2;
        cfg.n_sweeps = 60000;
        cfg.seed = seed;
        SampleBatch batch = sample(psi, cfg);
        CHECK(total_variation(psi, batch) < 0.03);
    }
}

TEST_CASE("parallel sampling equals the serial reference bit for bit") {
    RbmState psi = oracles::random_rbm(5, 10, 0.3, 7);
    SamplerConfig cfg;
    cfg.n_chains = 6;
    cfg.n_sweeps = 400;
    cfg.seed = 11;
    SampleBatch par = sample(psi, cfg, 2);
    SampleBatch ser = sample_serial(psi, cfg);
    CHECK(par.configs == ser.configs);
    CHECK(par.acceptance_rate == ser.acceptance_rate);
}

TEST_CASE("chains are statistically independent on the uniform state") {
    RbmState flat = random_init(4, 4, 0.0, 1);
    SamplerConfig cfg;
    cfg.n_chains = 16;
    cfg.n_sweeps = 2000;
    cfg.seed = 13;
    SampleBatch batch = sample(flat, cfg);
    const int per = batch.samples_per_chain();

    // observable: chain mean of site-0 spin
    std::vector<double> chain_means(cfg.n_chains, 0.0);
    double intra_var = 0.0;
    for (int c = 0; c < cfg.n_chains; ++c) {
        for (int i = 0; i < per; ++i) chain_means[c] += batch.configs(0, c * per + i);
        chain_means[c] /= per;
    }
    // intra-chain estimate of the variance of a chain mean, assuming the
    // worst plausible autocorrelation factor is absorbed by the factor-2
    // acceptance band below
    intra_var = 1.0 / per;
    double inter_var = 0.0;
    for (double m : chain_means) inter_var += m * m;
    inter_var /= cfg.n_chains;
    CHECK(inter_var < 2.0 * intra_var * 2.5);
    CHECK(inter_var > intra_var / 2.0 / 2.5);
}

TEST_CASE("degenerate states abort with a diagnostic") {
    RbmState psi = oracles::random_rbm(3, 3, 0.2, 5);
    psi.a[0] = Complex(std::nan(""), 0.0);
    SamplerConfig cfg;
    cfg.n_chains = 1;
    cfg.n_sweeps = 10;
    CHECK_THROWS(sample(psi, cfg));
}

TEST_CASE("config validation") {
    RbmState psi = oracles::random_rbm(3, 3, 0.1, 5);
    SamplerConfig cfg;
    cfg.n_chains = 0;
    CHECK_THROWS_AS(sample(psi, cfg), std::invalid_argument);
    cfg.n_chains = 1;
    cfg.thinning = 0;
    CHECK_THROWS_AS(sample(psi, cfg), std::invalid_argument);
    cfg.thinning = 3;
    cfg.n_sweeps = 10;
    CHECK(cfg.samples_per_chain() == 4);
}
