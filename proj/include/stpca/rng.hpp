#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace stpca {

/// splitmix64 finalizer; used both as a bit mixer and to expand seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e9b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stable substream derivation: one independent stream per (seed, index) pair.
/// Used for "one substream per tensor" splitting and for per-trial seeds.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(mix64(seed) ^ mix64(index + 0x6a09e667f3bcc909ULL));
}

/// Three-way variant for (master, cell, trial) addressing in experiment grids.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t trial) {
    return substream_seed(substream_seed(master, cell), trial);
}

/// Seedable Gaussian source. Same seed, same platform: identical draw sequence.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    double gaussian() { return normal_(engine_); }

    /// Re/Im parts each with variance 1/2 so the modulus has unit variance.
    std::complex<double> complex_gaussian() {
        static constexpr double inv_sqrt2 = 0.70710678118654752440;
        double re = normal_(engine_) * inv_sqrt2;
        double im = normal_(engine_) * inv_sqrt2;
        return {re, im};
    }

    double uniform() { return uniform_(engine_); }

    std::uint64_t integer() { return engine_(); }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

} // namespace stpca
