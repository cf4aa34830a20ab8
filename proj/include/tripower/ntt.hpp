#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "tripower/common.hpp"

namespace tripower::ntt {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// NTT-friendly primes p = c * 2^23 + 1 just below 2^62, with primitive root g.
// Five of them give ~310 bits, enough for the largest coefficients handled here.
struct Modulus {
    u64 p;
    u64 g;
};

inline constexpr std::array<Modulus, 6> kModuli = {{
    {4611686018326724609ULL, 3},
    {4611686018309947393ULL, 5},
    {4611686018058289153ULL, 5},
    {4611686017974403073ULL, 3},
    {4611686017781465089ULL, 14},
    {4611686017773076481ULL, 3},
}};

inline constexpr std::size_t kMaxTransform = std::size_t(1) << 23;

struct FieldOps {
    u64 p = 0;

    u64 add(u64 a, u64 b) const {
        u64 r = a + b;
        return r >= p ? r - p : r;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + (p - b); }
    u64 mul(u64 a, u64 b) const { return static_cast<u64>(u128(a) * b % p); }
    u64 pow(u64 a, u64 e) const {
        u64 r = 1;
        a %= p;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    u64 inv(u64 a) const { return pow(a, p - 2); }
    u64 reduce_i64(std::int64_t v) const {
        std::int64_t m = v % static_cast<std::int64_t>(p);
        return m < 0 ? static_cast<u64>(m + static_cast<std::int64_t>(p)) : static_cast<u64>(m);
    }
    // Shoup precondition for a fixed multiplicand w < p.
    u64 shoup(u64 w) const { return static_cast<u64>((u128(w) << 64) / p); }
    // a * w mod p using the precondition; needs p < 2^63.
    u64 mul_shoup(u64 a, u64 w, u64 wpre) const {
        const u64 q = static_cast<u64>((u128(a) * wpre) >> 64);
        u64 r = a * w - q * p;
        return r >= p ? r - p : r;
    }
};

// Radix-2 power-of-two NTT over one word-sized prime field. forward() leaves
// the coefficients in the scrambled order that inverse() expects, which is all
// a convolution needs.
class Transformer {
public:
    explicit Transformer(const Modulus& m);

    const FieldOps& field() const { return f_; }

    void forward(std::vector<u64>& a) const;
    void inverse(std::vector<u64>& a) const;

    // Polynomial product truncated to `trunc` coefficients. Inputs are
    // residues mod p. Throws resource_limit_error past the transform cap.
    std::vector<u64> multiply(std::vector<u64> a, std::vector<u64> b, std::size_t trunc) const;
    std::vector<u64> square(std::vector<u64> a, std::size_t trunc) const;

private:
    FieldOps f_;
    int max_log2_ = 0;
    std::array<u64, 64> rate2_{};
    std::array<u64, 64> irate2_{};
};

// Garner reconstruction of signed integers from residues modulo kModuli[0..k).
// residues[j][i] is value_i mod kModuli[j].p; results use the symmetric range
// (-M/2, M/2], M = product of the k primes.
std::vector<mpz_class> crt_signed(const std::vector<std::vector<u64>>& residues);

}  // namespace tripower::ntt
