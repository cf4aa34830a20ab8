// AVX2 variants of the summation kernels. This translation unit is compiled
// with -mavx2; callers reach it only through kernels.cpp, which checks CPU
// support first.

#if defined(__x86_64__)

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "tripower/common.hpp"
#include "tripower/kernels.hpp"

namespace tripower::kernels {

namespace {

// Per-lane Neumaier update: (s, c) += x.
inline void lane_add(__m256d& s, __m256d& c, __m256d x) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    const __m256d t = _mm256_add_pd(s, x);
    const __m256d abs_s = _mm256_andnot_pd(sign, s);
    const __m256d abs_x = _mm256_andnot_pd(sign, x);
    const __m256d big_s = _mm256_cmp_pd(abs_s, abs_x, _CMP_GE_OQ);
    const __m256d corr_s = _mm256_add_pd(_mm256_sub_pd(s, t), x);
    const __m256d corr_x = _mm256_add_pd(_mm256_sub_pd(x, t), s);
    c = _mm256_add_pd(c, _mm256_blendv_pd(corr_x, corr_s, big_s));
    s = t;
}

BlockSum moment_block_avx2(const double* lambda, const std::int64_t* sigma,
                           const std::uint8_t* sqfree, std::size_t count, int r) {
    __m256d s = _mm256_setzero_pd();
    __m256d c = _mm256_setzero_pd();
    const __m256i zero64 = _mm256_setzero_si256();
    const __m256i low_dwords = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);

    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256d x = _mm256_loadu_pd(lambda + i);
        __m256d term = _mm256_set1_pd(1.0);
        for (int k = 0; k < r; ++k) term = _mm256_mul_pd(term, x);

        // sigma fits in 32 bits: take the low dword of each 64-bit lane
        const __m256i sig64 =
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(sigma + i));
        const __m256i packed = _mm256_permutevar8x32_epi32(sig64, low_dwords);
        const __m256d sigd = _mm256_cvtepi32_pd(_mm256_castsi256_si128(packed));
        term = _mm256_mul_pd(term, sigd);

        // zero the lanes whose squarefree flag is 0
        std::uint32_t sf_bytes;
        std::memcpy(&sf_bytes, sqfree + i, 4);
        const __m256i sf64 = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(static_cast<int>(sf_bytes)));
        const __m256d drop = _mm256_castsi256_pd(_mm256_cmpeq_epi64(sf64, zero64));
        term = _mm256_andnot_pd(drop, term);

        lane_add(s, c, term);
    }

    alignas(32) double sv[4], cv[4];
    _mm256_store_pd(sv, s);
    _mm256_store_pd(cv, c);
    Accum acc;
    for (double v : sv) acc.add(v);
    for (double v : cv) acc.add(v);

    for (; i < count; ++i) {
        if (!sqfree[i]) continue;
        const double x = lambda[i];
        double p = 1.0;
        for (int k = 0; k < r; ++k) p *= x;
        acc.add(p * static_cast<double>(sigma[i]));
    }
    return {acc.s, acc.c};
}

double max_abs_ratio_avx2(const double* lambda, const std::uint32_t* divcount,
                          std::size_t count) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d best = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256d lam = _mm256_andnot_pd(sign, _mm256_loadu_pd(lambda + i));
        const __m128i d32 =
            _mm_loadu_si128(reinterpret_cast<const __m128i*>(divcount + i));
        const __m256d div = _mm256_cvtepi32_pd(d32);
        best = _mm256_max_pd(best, _mm256_div_pd(lam, div));
    }
    alignas(32) double bv[4];
    _mm256_store_pd(bv, best);
    double out = std::max(std::max(bv[0], bv[1]), std::max(bv[2], bv[3]));
    for (; i < count; ++i)
        out = std::max(out, std::fabs(lambda[i]) / static_cast<double>(divcount[i]));
    return out;
}

constexpr Kernels kAvx2{"avx2", &moment_block_avx2, &max_abs_ratio_avx2};

}  // namespace

const Kernels& avx2_kernels_impl() { return kAvx2; }

}  // namespace tripower::kernels

#endif  // __x86_64__
