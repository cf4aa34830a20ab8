#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "tripower/arith.hpp"

namespace tripower::lattice {

enum class PolyKind { alpha, alpha1, alpha2 };

PolyKind parse_poly_kind(std::string_view name);
const char* poly_name(PolyKind kind);

// One coordinate contributes coeff * T(x) with T(x) = x(x+1)/2 (triangular)
// or coeff * x^2 (square). All three quaternary polynomials split this way.
struct CoordTerm {
    std::int64_t coeff = 1;
    bool triangular = true;
};

struct PolynomialSpec {
    PolyKind kind = PolyKind::alpha;
    std::array<CoordTerm, 4> terms{};

    static PolynomialSpec make(PolyKind kind);
};

// Exact value; nonnegative for all integer points. Inputs are bounded
// (|x_i| < 2^29) so the arithmetic stays inside int64.
std::int64_t poly_value(const PolynomialSpec& spec, const std::array<std::int64_t, 4>& x);

// counts[n] = #{x in Z^4 : spec(x) = n}, exact.
struct RepTable {
    PolynomialSpec spec;
    std::int64_t limit = 0;
    std::vector<std::int64_t> counts;
};

inline constexpr std::int64_t kDefaultRepBudget = std::int64_t(2) << 30;

// Builds counts[0..limit] by convolving the four per-coordinate value tables
// (triangular substitution: each 1-d value appears with multiplicity 2, or 1
// for the apex of a square term). Throws resource_limit_error past the budget.
RepTable rep_counts(const PolynomialSpec& spec, std::int64_t limit,
                    std::int64_t budget_bytes = kDefaultRepBudget);

struct RepInconsistency {
    std::int64_t n = 0;      // first n where no consistent c exists
    std::int64_t count = 0;  // counts[n-1]
    std::int64_t sigma = 0;  // sigma(n)
};

struct RepIdentityResult {
    bool ok = false;
    std::int64_t c_num = 0;  // measured proportionality constant, reduced
    std::int64_t c_den = 1;
    std::optional<RepInconsistency> failure;
};

// Finds the constant c with counts[n-1] = c * sigma(n) for all 1 <= n <=
// limit+1, or reports the first inconsistent n. The constant is measured from
// the data, never assumed.
RepIdentityResult verify_rep_identity(const RepTable& table,
                                      const arith::MultiplicativeTables& tables);
RepIdentityResult verify_rep_identity(const PolynomialSpec& spec, std::int64_t limit,
                                      const arith::MultiplicativeTables& tables);

// Yields every x with spec(x) + 1 <= bound exactly once, in lexicographic
// order of (x1, x2, x3, x4). bound <= 0 yields nothing.
void enumerate_values(
    const PolynomialSpec& spec, std::int64_t bound,
    const std::function<void(std::int64_t value, const std::array<std::int64_t, 4>& x)>& fn);

// CSV rows: n,delta4,sigma_next,ratio  (sigma_next = sigma(n+1))
void write_csv(const RepTable& table, const arith::MultiplicativeTables& tables,
               std::ostream& os);

}  // namespace tripower::lattice
