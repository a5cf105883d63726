#pragma once

#include <cstdint>

namespace firmscale {

// Counter-based uniform stream built on the SplitMix64 finalizer.
// SplitMix64 advances its state by the golden-ratio increment and mixes;
// because the state after n steps is seed + n*GOLDEN, the n-th output can
// be evaluated directly from (seed, n). Draws are therefore addressable by
// index: any partition of [0, n) over threads reproduces the serial stream.

namespace detail {
inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
}  // namespace detail

/// n-th 64-bit word of the SplitMix64 stream seeded with `seed`.
inline constexpr std::uint64_t random_word_at(std::uint64_t seed, std::uint64_t index) {
    return detail::mix64(seed + (index + 1) * detail::kGolden);
}

/// n-th uniform draw in [0, 1 - 2^-53]. The top 53 bits give a draw that can
/// never round to 1, so Pareto quantiles stay finite.
inline constexpr double uniform01_at(std::uint64_t seed, std::uint64_t index) {
    return static_cast<double>(random_word_at(seed, index) >> 11) * 0x1.0p-53;
}

}  // namespace firmscale
