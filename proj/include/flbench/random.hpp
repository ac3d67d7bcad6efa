#pragma once

#include <cstdint>
#include <random>

namespace flbench {

/// splitmix64 finalizer; spreads correlated inputs into well-mixed seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Random stream for episode k of a run. Derived from (root_seed, k) only, so
/// any single episode can be reproduced without replaying the ones before it.
inline std::mt19937_64 episode_stream(std::uint64_t root_seed, std::uint64_t episode) {
    return std::mt19937_64(splitmix64(splitmix64(root_seed) ^ splitmix64(episode + 1)));
}

/// Uniform double in [0, 1), top 53 bits of one engine draw.
inline double next_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unbiased integer in [0, n), rejection sampled. n must be >= 1.
inline std::uint32_t uniform_index(std::mt19937_64& rng, std::uint32_t n) {
    const std::uint64_t reject_below = (0 - static_cast<std::uint64_t>(n)) % n;  // 2^64 mod n
    std::uint64_t r = rng();
    while (r < reject_below) r = rng();
    return static_cast<std::uint32_t>(r % n);
}

}  // namespace flbench
