#include "tripower/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

#include "tripower/common.hpp"

namespace tripower::kernels {

namespace {

BlockSum moment_block_scalar(const double* lambda, const std::int64_t* sigma,
                             const std::uint8_t* sqfree, std::size_t count, int r) {
    Accum acc;
    for (std::size_t i = 0; i < count; ++i) {
        if (!sqfree[i]) continue;
        const double x = lambda[i];
        double p = 1.0;
        for (int k = 0; k < r; ++k) p *= x;
        acc.add(p * static_cast<double>(sigma[i]));
    }
    return {acc.s, acc.c};
}

double max_abs_ratio_scalar(const double* lambda, const std::uint32_t* divcount,
                            std::size_t count) {
    double best = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double ratio = std::fabs(lambda[i]) / static_cast<double>(divcount[i]);
        if (ratio > best) best = ratio;
    }
    return best;
}

constexpr Kernels kScalar{"scalar", &moment_block_scalar, &max_abs_ratio_scalar};

}  // namespace

const Kernels& scalar_kernels() { return kScalar; }

#if defined(__x86_64__)
const Kernels& avx2_kernels_impl();  // defined in kernels_avx2.cpp (built with -mavx2)

const Kernels* avx2_kernels() {
    static const Kernels* k = []() -> const Kernels* {
        if (!__builtin_cpu_supports("avx2")) return nullptr;
        return &avx2_kernels_impl();
    }();
    return k;
}
#else
const Kernels* avx2_kernels() { return nullptr; }
#endif

const Kernels& active_kernels() {
    static const Kernels& chosen = []() -> const Kernels& {
        const Kernels* avx = avx2_kernels();
        if (const char* env = std::getenv("TRIPOWER_KERNEL")) {
            if (std::strcmp(env, "scalar") == 0) return scalar_kernels();
            if (std::strcmp(env, "avx2") == 0 && avx) return *avx;
        }
        return avx ? *avx : scalar_kernels();
    }();
    return chosen;
}

}  // namespace tripower::kernels
