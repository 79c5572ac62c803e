#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include "gittins/error.hpp"

namespace gittins {

namespace detail {

// SplitMix64 finalizer; used to decorrelate derived seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace detail

/// Seedable random stream backed by std::mt19937_64.
///
/// Uniform doubles and bounded integers are produced here from raw 64-bit
/// draws so that their sequences depend only on the engine, not on the
/// standard library's distribution implementations. Independent streams
/// for parallel runs or for separate consumers inside one run (agent vs.
/// environment) come from derive(), which hashes (seed, stream id) with
/// SplitMix64.
class RandomSource {
public:
    using engine_type = std::mt19937_64;

    explicit RandomSource(std::uint64_t seed = 0) : seed_(seed), engine_(detail::splitmix64(seed)) {}

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    [[nodiscard]] RandomSource derive(std::uint64_t stream) const
    {
        return RandomSource(detail::splitmix64(seed_ ^ detail::splitmix64(stream + 0x632BE59BD9B4E019ULL)));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n), rejection sampled (no modulo bias).
    std::uint64_t uniform_index(std::uint64_t n)
    {
        detail::require(n > 0, "uniform_index: empty range");
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % n);
        std::uint64_t draw = 0;
        do {
            draw = engine_();
        } while (draw >= limit);
        return draw % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Access for std distributions (normal, gamma, poisson, ...); those are
    /// reproducible for a fixed seed on the same build.
    engine_type& engine() noexcept { return engine_; }

private:
    std::uint64_t seed_;
    engine_type engine_;
};

} // namespace gittins
