#pragma once

#include <cstdint>
#include <string_view>

namespace skewlab {

// Counter-based hashing used everywhere a reproducible random value is
// needed. The exact bit-level rules below form the seed contract of the
// toolkit; changing any of them changes every simulated field.
//
//   splitmix64(x)           — Steele/Lea/Flood finalizer, one round
//   site_hash(seed, x, y)   — splitmix64(splitmix64(splitmix64(seed) ^ ux) ^ uy)
//                             with ux, uy the two's-complement casts of x, y
//   split_seed(master, i)   — splitmix64(splitmix64(master) ^ u64(i))
//   uniform01(h)            — (h >> 11) * 2^-53, in [0,1)

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t site_hash(std::uint64_t seed, std::int64_t x, std::int64_t y) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(x));
    h = splitmix64(h ^ static_cast<std::uint64_t>(y));
    return h;
}

/// Seed for replicate/grid-index i derived from a master seed. Nested
/// splitting (split_seed(split_seed(m, i), j)) yields per-(i,j) streams.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t i) {
    return splitmix64(splitmix64(master) ^ i);
}

inline double uniform01(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// FNV-1a over bytes; used for config digests.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace skewlab
