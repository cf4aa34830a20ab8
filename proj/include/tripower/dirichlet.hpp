#pragma once

#include <cstdint>
#include <initializer_list>

#include "tripower/arith.hpp"
#include "tripower/eigenform.hpp"
#include "tripower/local_factor.hpp"
#include "tripower/sympow.hpp"

namespace tripower::dirichlet {

enum class SeriesKind {
    zeta,           // Riemann zeta
    l_chi8,         // Dirichlet L for chi8
    hecke,          // L(s, f)
    hecke_twisted,  // L(s, f x chi8)
    sym2,           // L(s, sym^2 f)
    sym2_twisted,   // L(s, sym^2 f x chi8)
    u_r,            // compensator U_r(s)
};

// Partial Euler product with a bound on the log of the omitted factor, so the
// interval [value e^{-tail}, value e^{tail}] brackets refinements.
struct EulerValue {
    double value = 0.0;
    std::int64_t prime_bound = 0;
    double tail_bound = 0.0;
    bool tail_heuristic = false;  // true for the boundary evaluation at s = 1
};

EulerValue combine(std::initializer_list<EulerValue> factors);

// Truncated local factor of L_r at s.p as a power series in x = p^{-s}:
//   prod_n [sym^{r-2n} f at s-1]^{e_n} [sym^{r-2n} f x chi8 at s]^{e_n},
// e_n = C(r,n) - C(r,n-1), n <= r/2. coeffs[0] = 1 and the degree-1
// coefficient is lambda_p^r (p + chi8(p)).
LocalFactor local_L_r(int r, const sympow::SatakeLocal& s, int degree = 4);

// Compensating local factor making (1 + lambda_p^r sigma(p) x) = L * U hold:
// with A the coefficients of the inverse local factor of L_r (the finite
// root polynomial, A(p) = -lambda_p^r sigma(p)), set B(1) = 1, B(p) = 0,
// B(p^k) = A(p^k) + A(p^{k-1}) lambda_p^r sigma(p).
LocalFactor local_U_r(int r, const sympow::SatakeLocal& s, int degree = 4);

// Partial Euler product over p <= prime_bound at real s, strictly inside the
// absolute-convergence region (s > 1 for the L-functions, s > 3/2 for U_r).
// table supplies lambda(p); it may be null for zeta and l_chi8. Per-prime
// factors reduce blockwise in fixed order, so results are bit-stable across
// thread counts.
EulerValue euler_value(SeriesKind kind, double s, std::int64_t prime_bound,
                       const arith::MultiplicativeTables& tables,
                       const eigenform::EigenformTable* table, int r = 2, int threads = 0);

// L(1, sym^2 f) sits on the convergence boundary: evaluated with a large
// cutoff and a flagged heuristic tail estimate instead of a rigorous bound.
EulerValue sym2_edge_value(std::int64_t prime_bound, const arith::MultiplicativeTables& tables,
                           const eigenform::EigenformTable& table, int threads = 0);

struct ConstantC {
    EulerValue l2_chi8;       // L(2, chi8)
    EulerValue l1_sym2;       // L(1, sym^2 f), heuristic tail
    EulerValue l2_sym2_chi8;  // L(2, sym^2 f x chi8)
    EulerValue u2;            // U_2(2)
    EulerValue total;
};

// The main-term constant: L(2, chi8) L(1, sym^2 f) L(2, sym^2 f x chi8) U_2(2).
ConstantC constant_C(std::int64_t prime_bound, const arith::MultiplicativeTables& tables,
                     const eigenform::EigenformTable& table,
                     std::int64_t sym2_edge_prime_bound = 0,  // 0: max(10^6, prime_bound)
                     int threads = 0);

}  // namespace tripower::dirichlet
