#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace otoc {

// splitmix64 step; used to derive independent stream seeds from a base seed
// so that chains, steps and branches never share a stream.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t s1, std::uint64_t s2) {
    return mix_seed(mix_seed(seed, s1), s2);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t s1, std::uint64_t s2,
                              std::uint64_t s3) {
    return mix_seed(mix_seed(seed, s1, s2), s3);
}

// mt19937_64 with hand-written uniform/normal transforms. The engine is
// fully specified by the standard, the distributions are not; doing the
// transforms here keeps streams identical across compilers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n)
    int below(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }

    int pm_one() { return (eng_() & 1) ? 1 : -1; }

    // N(0, 1) via Box-Muller (cosine branch only)
    double normal() {
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace otoc
