#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace tripower::dirichlet {

// Truncated power series in x = p^{-s} representing one Euler factor.
// coeffs[0] is always 1.
struct LocalFactor {
    std::int64_t p = 0;
    std::vector<double> coeffs;  // size = degree + 1

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    double eval(double x) const {
        double acc = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
        return acc;
    }
};

// Truncated product, degree = min of the operands'.
inline LocalFactor mul_trunc(const LocalFactor& a, const LocalFactor& b) {
    if (a.p != b.p) throw std::invalid_argument("mul_trunc: mismatched primes");
    const std::size_t n = std::min(a.coeffs.size(), b.coeffs.size());
    LocalFactor out{a.p, std::vector<double>(n, 0.0)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; i + j < n && j < b.coeffs.size(); ++j)
            out.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
    return out;
}

// Truncated reciprocal: a * reciprocal(a) = 1 + O(x^{degree+1}).
inline LocalFactor reciprocal_trunc(const LocalFactor& a) {
    if (a.coeffs.empty() || a.coeffs[0] != 1.0)
        throw std::invalid_argument("reciprocal_trunc: leading coefficient must be 1");
    LocalFactor out{a.p, std::vector<double>(a.coeffs.size(), 0.0)};
    out.coeffs[0] = 1.0;
    for (std::size_t k = 1; k < a.coeffs.size(); ++k) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= k; ++j)
            if (j < a.coeffs.size()) acc += a.coeffs[j] * out.coeffs[k - j];
        out.coeffs[k] = -acc;
    }
    return out;
}

}  // namespace tripower::dirichlet
