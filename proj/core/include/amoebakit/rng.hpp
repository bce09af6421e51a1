#pragma once

#include <cstdint>

namespace amoebakit {

/// splitmix64 output finalizer.
constexpr std::uint64_t splitmixFinalize(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of an independent stream: mixSeed(m, i) = F(m ^ F(i + G)) with F the
/// splitmix64 finalizer and G = 0x9E3779B97F4A7C15.
constexpr std::uint64_t mixSeed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmixFinalize(master ^ splitmixFinalize(index + 0x9E3779B97F4A7C15ULL));
}

/// Standard splitmix64 generator (Steele, Lea, Flood).
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return splitmixFinalize(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    constexpr double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

} // namespace amoebakit
