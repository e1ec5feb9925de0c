#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace hexakin {

// std::mt19937_64 output is pinned by the standard; the helpers below avoid
// std::uniform_*_distribution, whose mapping is implementation-defined.

/// Unbiased integer in [0, n) via rejection sampling.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % n;
}

/// Double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Double in [-1, 1).
inline double uniform_symmetric(std::mt19937_64& rng) {
    return 2.0 * uniform_unit(rng) - 1.0;
}

} // namespace hexakin
