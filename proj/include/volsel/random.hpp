#pragma once

#include <cstdint>
#include <random>

namespace volsel {

/// SplitMix64 finaliser; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Seeded 64-bit generator with platform-independent uniform and normal draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Standard normal by the Box-Muller transform.
    double normal() noexcept;

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

} // namespace volsel
