#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace secrelay {

/// Generator backing all random draws. The id string is written into output
/// metadata so results stay portable across implementations.
using Engine = std::mt19937_64;
inline constexpr const char* kGeneratorId = "mt19937_64";

/// splitmix64 finalizer (Steele et al.), bijective on 64-bit words.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Uniform double in the open interval (0,1): ((x>>11)+0.5) * 2^-53.
/// Both endpoints are unreachable, so -log() of it is always finite and > 0.
inline double uniform_open01(Engine& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

inline double uniform_in(Engine& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_open01(rng);
}

/// Unit-mean exponential draw; strictly positive.
inline double unit_exponential(Engine& rng) {
    return -std::log(uniform_open01(rng));
}

}  // namespace secrelay
