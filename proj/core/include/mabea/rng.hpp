#pragma once

/// @file rng.hpp
/// @brief Seeded random stream with platform-independent distributions.
///
/// `std::mt19937_64` output is fully specified by the standard, but the
/// `<random>` distributions are not: libstdc++ and libc++ produce different
/// streams for the same engine state. Every distribution used by the
/// simulation is therefore implemented here on top of the raw engine so that
/// a master seed replays identically on any toolchain.

#include <cstdint>
#include <random>

namespace mabea {

/// SplitMix64 finalizer. Used for seed derivation.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Child seed for replication `index` of an experiment seeded with `master`.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master,
                                                  std::uint64_t index) noexcept {
    return mix64(mix64(master) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) : engine_(mix64(seed)) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi].
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Unbiased integer in [0, n). `n` must be positive.
    std::uint64_t below(std::uint64_t n);

    bool bernoulli(double p) { return uniform01() < p; }

    /// Standard normal (Marsaglia polar method, second variate cached).
    double normal();

    /// Gamma(shape, 1) via Marsaglia-Tsang; shapes below 1 use the
    /// U^(1/shape) boost.
    double gamma(double shape);

    /// Beta(a, b) as X/(X+Y) with X ~ Gamma(a), Y ~ Gamma(b).
    double beta(double a, double b);

    friend bool operator==(const Rng& lhs, const Rng& rhs) {
        return lhs.engine_ == rhs.engine_ && lhs.has_spare_ == rhs.has_spare_ &&
               (!lhs.has_spare_ || lhs.spare_ == rhs.spare_);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace mabea
