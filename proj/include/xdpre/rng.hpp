#pragma once

#include <cstdint>
#include <random>

namespace xdpre {

// All randomness flows through a single generator type so that a seed pins
// every derived value bit-for-bit.  mt19937_64 produces an identical stream
// on every platform; the helpers below avoid std::uniform_int_distribution,
// whose output is implementation-defined.
using Rng = std::mt19937_64;

// Uniform value in [0, bound) by rejection sampling.  bound must be nonzero.
inline uint64_t uniform_u64(Rng& rng, uint64_t bound) {
    if (bound == 0) return rng(); // full range
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
        uint64_t v = rng();
        if (v < limit) return v % bound;
    }
}

inline bool coin(Rng& rng) { return rng() & 1; }

namespace detail {
// SplitMix64 step, used only for seed derivation.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
} // namespace detail

// Deterministically derives an independent child seed from a parent seed and
// an index path.  derive_seed(s, a, b) != derive_seed(s, a, b') for b != b'.
template <typename... Ix>
uint64_t derive_seed(uint64_t seed, Ix... indices) {
    uint64_t state = seed ^ 0xa076'1d64'78bd'642full;
    uint64_t out = detail::splitmix64(state);
    ((state ^= detail::splitmix64(state) + static_cast<uint64_t>(indices),
      out = detail::splitmix64(state)),
     ...);
    return out;
}

} // namespace xdpre
