#pragma once

#include <cstddef>
#include <cstdint>

namespace tripower::kernels {

// Compensated partial sum of one block; pairs merge deterministically.
struct BlockSum {
    double sum = 0.0;
    double comp = 0.0;
};

// sum_i sqfree[i] ? lambda[i]^r * sigma[i] : 0 over one block, Neumaier-compensated.
// The power is evaluated by r sequential multiplies in every variant, so
// per-element rounding matches across kernels; only the summation order differs.
// Vector variants assume |sigma[i]| < 2^31 (holds for every table this
// project can build under its memory budget).
using MomentBlockFn = BlockSum (*)(const double* lambda, const std::int64_t* sigma,
                                   const std::uint8_t* sqfree, std::size_t count, int r);

// max_i |lambda[i]| / divcount[i]; exact regardless of evaluation order.
using MaxRatioFn = double (*)(const double* lambda, const std::uint32_t* divcount,
                              std::size_t count);

struct Kernels {
    const char* name;
    MomentBlockFn moment_block;
    MaxRatioFn max_abs_ratio;
};

const Kernels& scalar_kernels();

// AVX2 variant; null when the binary or the CPU lacks support.
const Kernels* avx2_kernels();

// Best available variant, overridable with TRIPOWER_KERNEL=scalar|avx2
// (read once, at first use).
const Kernels& active_kernels();

// Fixed summation granule. Callers split index ranges on multiples of kBlock
// and merge per-block sums in index order, which keeps multi-threaded totals
// bit-identical for any thread count.
inline constexpr std::size_t kBlock = 4096;

}  // namespace tripower::kernels
