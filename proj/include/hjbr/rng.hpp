#pragma once

#include <cmath>
#include <cstdint>

namespace hjbr::rng {

inline constexpr double kTwoPi = 6.2831853071795864769;

// 64-bit avalanche mixer (splitmix64 finalizer).
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Seed of the i-th sub-stream of a batch. Pure function of (seed, i), so a
// batch decomposes into independent per-path streams no matter how the paths
// are scheduled across workers.
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t i) {
    return splitmix64(seed ^ splitmix64(i + 0x632be59bd9b4e019ull));
}

// Uniform in [0,1) from the top 53 bits of h.
inline double to_unit(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Uniform in [0,1) at position k of the stream with the given seed.
inline double uniform(std::uint64_t seed, std::uint64_t k) {
    return to_unit(splitmix64(seed ^ splitmix64(k + 0x9e3779b97f4a7c15ull)));
}

// Standard normal at position k of the stream with the given seed.
// Counter-based: the value depends only on (seed, k), never on call order,
// which is what makes batch simulations schedule-independent.
inline double normal(std::uint64_t seed, std::uint64_t k) {
    const std::uint64_t h1 = splitmix64(seed ^ splitmix64(k + 0x9e3779b97f4a7c15ull));
    const std::uint64_t h2 = splitmix64(h1 + 0xd1b54a32d192ed03ull);
    const double u1 = (static_cast<double>(h1 >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = to_unit(h2);                                        // [0,1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace hjbr::rng
