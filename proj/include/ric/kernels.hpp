#pragma once

#include <cstddef>
#include <cstdint>

#include "ric/chain.hpp"
#include "ric/pattern.hpp"

namespace ric {

// Aggregate survival of one pattern over a batch of chains:
// K_total = sum of survival depths, I_total = number of chains where the
// pattern died before the realized length (censored survivals).
struct SurvivalStats {
    uint64_t K_total = 0;
    uint64_t I_total = 0;
    uint64_t M = 0;
};

SurvivalStats survival_stats_scalar(const ChainSet& cs, const Item* items, std::size_t n_items);

// Vectorized variant (AVX2 on x86-64). Falls back to the scalar kernel
// when the instruction set is missing; bit-identical results either way.
SurvivalStats survival_stats_simd(const ChainSet& cs, const Item* items, std::size_t n_items);
bool simd_kernel_available();

// Dispatches once per process to the fastest available kernel.
SurvivalStats survival_stats(const ChainSet& cs, const Item* items, std::size_t n_items);
const char* active_kernel_name();

inline SurvivalStats survival_stats(const ChainSet& cs, const Pattern& s) {
    return survival_stats(cs, s.items().data(), s.items().size());
}

}  // namespace ric
