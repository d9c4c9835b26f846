#include "ric/kernels.hpp"

#include <algorithm>

#if defined(__x86_64__) || defined(_M_X64)
#define RIC_HAVE_AVX2_BUILD 1
#include <immintrin.h>
#endif

namespace ric {

SurvivalStats survival_stats_scalar(const ChainSet& cs, const Item* items, std::size_t n_items) {
    SurvivalStats st;
    st.M = cs.M;
    const uint64_t M = cs.M;
    if (n_items == 0) {
        for (uint64_t m = 0; m < M; ++m) st.K_total += cs.realized[m];
        return st;
    }
    for (uint64_t m = 0; m < M; ++m) {
        uint64_t k = UINT64_MAX;
        for (std::size_t i = 0; i < n_items; ++i) {
            const std::size_t base = static_cast<std::size_t>(items[i].feature) * M + m;
            const uint64_t depth = cs.head_col[base] == items[i].code ? cs.counts_col[base] : 0;
            k = std::min(k, depth);
        }
        st.K_total += k;
        st.I_total += k < cs.realized[m] ? 1 : 0;
    }
    return st;
}

#ifdef RIC_HAVE_AVX2_BUILD

__attribute__((target("avx2"))) static SurvivalStats survival_stats_avx2(const ChainSet& cs,
                                                                         const Item* items,
                                                                         std::size_t n_items) {
    SurvivalStats st;
    st.M = cs.M;
    const uint64_t M = cs.M;
    if (n_items == 0) {
        for (uint64_t m = 0; m < M; ++m) st.K_total += cs.realized[m];
        return st;
    }

    __m256i k_acc = _mm256_setzero_si256();
    uint64_t censored = 0;
    uint64_t m = 0;
    for (; m + 4 <= M; m += 4) {
        __m256i k = _mm256_set1_epi64x(INT64_MAX);
        for (std::size_t i = 0; i < n_items; ++i) {
            const std::size_t base = static_cast<std::size_t>(items[i].feature) * M + m;
            const __m128i heads =
                _mm_loadu_si128(reinterpret_cast<const __m128i*>(cs.head_col.data() + base));
            const __m256i counts =
                _mm256_loadu_si256(reinterpret_cast<const __m256i*>(cs.counts_col.data() + base));
            const __m128i eq32 = _mm_cmpeq_epi32(heads, _mm_set1_epi32(static_cast<int>(items[i].code)));
            const __m256i mask = _mm256_cvtepi32_epi64(eq32);
            const __m256i depth = _mm256_and_si256(mask, counts);
            // Unsigned range stays below 2^63, so the signed compare is safe.
            const __m256i gt = _mm256_cmpgt_epi64(k, depth);
            k = _mm256_blendv_epi8(k, depth, gt);
        }
        k_acc = _mm256_add_epi64(k_acc, k);
        const __m256i realized =
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(cs.realized.data() + m));
        const __m256i lt = _mm256_cmpgt_epi64(realized, k);
        censored += static_cast<unsigned>(
            __builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(_mm256_castsi256_pd(lt)))));
    }

    alignas(32) uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), k_acc);
    st.K_total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    st.I_total = censored;

    for (; m < M; ++m) {
        uint64_t k = UINT64_MAX;
        for (std::size_t i = 0; i < n_items; ++i) {
            const std::size_t base = static_cast<std::size_t>(items[i].feature) * M + m;
            const uint64_t depth = cs.head_col[base] == items[i].code ? cs.counts_col[base] : 0;
            k = std::min(k, depth);
        }
        st.K_total += k;
        st.I_total += k < cs.realized[m] ? 1 : 0;
    }
    return st;
}

bool simd_kernel_available() { return __builtin_cpu_supports("avx2"); }

SurvivalStats survival_stats_simd(const ChainSet& cs, const Item* items, std::size_t n_items) {
    if (simd_kernel_available()) return survival_stats_avx2(cs, items, n_items);
    return survival_stats_scalar(cs, items, n_items);
}

#else

bool simd_kernel_available() { return false; }

SurvivalStats survival_stats_simd(const ChainSet& cs, const Item* items, std::size_t n_items) {
    return survival_stats_scalar(cs, items, n_items);
}

#endif

namespace {
using KernelFn = SurvivalStats (*)(const ChainSet&, const Item*, std::size_t);

KernelFn pick_kernel() {
    return simd_kernel_available() ? &survival_stats_simd : &survival_stats_scalar;
}
}  // namespace

SurvivalStats survival_stats(const ChainSet& cs, const Item* items, std::size_t n_items) {
    static const KernelFn fn = pick_kernel();
    return fn(cs, items, n_items);
}

const char* active_kernel_name() { return simd_kernel_available() ? "avx2" : "scalar"; }

}  // namespace ric
