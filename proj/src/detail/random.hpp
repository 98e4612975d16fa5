#pragma once

#include <cstdint>
#include <random>

namespace jumpfbst::detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed of chunk `index` within stream `stream` of a master seed. Chunk
// boundaries are fixed, so results do not depend on the worker count.
inline std::uint64_t chunk_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(master ^ (stream * 0xD1B54A32D192ED03ULL)) + index);
}

// Uniform on the open interval (0,1).
inline double open01(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace jumpfbst::detail
