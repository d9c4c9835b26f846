#pragma once

#include <cassert>
#include <cstdint>
#include <string_view>

namespace ric {

// Counter-scrambled generator (splitmix64). Small, fast, and trivially
// seedable from derived streams, which is what the chain sampler needs:
// every (class, chain index) pair gets an independent stream so results
// do not depend on scheduling.
struct RngState {
    uint64_t state = 0;
};

inline uint64_t next_u64(RngState& rng) {
    uint64_t z = (rng.state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Unbiased draw from [0, n) via multiply-shift with rejection.
inline uint64_t next_below(RngState& rng, uint64_t n) {
    assert(n > 0);
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64(rng)) * n;
    auto lo = static_cast<uint64_t>(m);
    if (lo < n) {
        const uint64_t threshold = (0 - n) % n;
        while (lo < threshold) {
            m = static_cast<unsigned __int128>(next_u64(rng)) * n;
            lo = static_cast<uint64_t>(m);
        }
    }
    return static_cast<uint64_t>(m >> 64);
}

inline double next_unit(RngState& rng) {
    return static_cast<double>(next_u64(rng) >> 11) * 0x1.0p-53;
}

// Derives a child seed from (parent seed, stream id). Used to give every
// chain its own stream: seed_chain = derive(derive(master, class), index).
inline uint64_t derive_seed(uint64_t parent, uint64_t stream) {
    RngState s{parent ^ (stream + 0x632be59bd9b4e019ull) * 0x2545f4914f6cdd1dull};
    next_u64(s);
    return next_u64(s);
}

inline uint64_t hash_string(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace ric
