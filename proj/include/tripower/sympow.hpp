#pragma once

#include <cstdint>

#include "tripower/local_factor.hpp"

namespace tripower::sympow {

// Local Satake data at a prime: unit-modulus pair alpha = e^{i theta},
// beta = e^{-i theta} with alpha + beta = lambda_p, alpha * beta = 1.
struct SatakeLocal {
    std::int64_t p = 0;
    double lambda_p = 0.0;  // in [-2, 2]
    double theta = 0.0;     // in [0, pi], lambda_p = 2 cos(theta)

    static SatakeLocal from_lambda(std::int64_t p, double lambda_p);
};

// U_m(cos theta) by the three-term recurrence u_{m+1} = lambda_p u_m - u_{m-1},
// u_0 = 1, u_1 = lambda_p. The recurrence stays stable across [-2, 2] where
// the sin((m+1)theta)/sin(theta) form degenerates at the endpoints.
// |result| <= m + 1.
double sym_lambda_p(int m, const SatakeLocal& s);

// Truncated local Euler factor of the m-th symmetric power:
// prod_{j=0..m} (1 - alpha^{m-j} beta^j x)^{-1} up to x^degree.
// coeffs[0] = 1, coeffs[1] = sym_lambda_p(m, s).
dirichlet::LocalFactor sym_local_factor(int m, const SatakeLocal& s, int degree);

// A_{l,j} = C(l, (l-j)/2) - C(l, (l-j)/2 - 1) when j = l (mod 2), else 0;
// C(r, n) = 0 for n < 0. These satisfy x^l = sum_j A_{l,j} U_j(x/2).
std::int64_t chebyshev_A(int ell, int j);

// sum_{n=0..r/2} (C(r,n) - C(r,n-1)) * sym_lambda_p(r - 2n, s); algebraically
// equal to lambda_p^r.
double power_decomposition(int r, const SatakeLocal& s);

}  // namespace tripower::sympow
