#pragma once

#include <cmath>
#include <cstdint>

namespace seltrack {

// Deterministic counter-based random streams. Every draw is keyed by
// (seed, stream coordinates), so the noise seen by one satellite at one epoch
// does not depend on how many other draws a run makes.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Mixes a seed and up to three stream coordinates into one 64-bit key.
inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                std::uint64_t c = 0) {
    std::uint64_t k = splitmix64(seed);
    k = splitmix64(k ^ a);
    k = splitmix64(k ^ b);
    k = splitmix64(k ^ c);
    return k;
}

/// Uniform double in (0, 1) derived from a key.
inline double uniform_from_key(std::uint64_t key) {
    return (static_cast<double>(key >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

/// Standard normal draw (Box-Muller) derived from a key.
inline double normal_from_key(std::uint64_t key) {
    const double u1 = uniform_from_key(splitmix64(key));
    const double u2 = uniform_from_key(splitmix64(key ^ 0xda3e39cb94b95bdbULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace seltrack
