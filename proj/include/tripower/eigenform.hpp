#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "tripower/arith.hpp"

namespace tripower::eigenform {

// Exact Fourier coefficients a(n) of the level-1 eigenform of the given
// weight, with lambda[n] = a(n) / n^((weight-1)/2). Built once, immutable.
struct EigenformTable {
    int weight = 12;
    std::int64_t limit = 0;
    std::vector<mpz_class> a;    // index 0 unused
    std::vector<double> lambda;  // index 0 unused
};

struct BuildOptions {
    int threads = 0;  // 0 = hardware concurrency
    std::int64_t memory_budget_bytes = std::int64_t(6) << 30;
};

// Weights whose cusp space is one-dimensional; anything else is rejected.
const std::vector<int>& supported_weights();

// Sparse coefficients of prod_{n>=1} (1-q^n)^3 up to q^limit:
// sum_{k>=0} (-1)^k (2k+1) q^{k(k+1)/2}.
std::vector<std::pair<std::int64_t, std::int64_t>> eta3_series(std::int64_t limit);

// Ramanujan tau table: a(n) = tau(n), n = 1..limit.
EigenformTable delta_coefficients(std::int64_t limit, const BuildOptions& opt = {});

// Weight 12 is the tau table; other supported weights come from multiplying
// by integer Eisenstein series (E4 = 1 + 240 sum sigma_3(n) q^n,
// E6 = 1 - 504 sum sigma_5(n) q^n). Exact integer arithmetic throughout.
EigenformTable eigenform_coefficients(int weight, std::int64_t limit,
                                      const BuildOptions& opt = {});

// Exact integer check of a(m) a(n) = sum_{d | gcd(m,n)} d^(weight-1) a(mn/d^2).
bool verify_hecke(const EigenformTable& t, std::int64_t m, std::int64_t n);

struct DeligneViolation {
    std::int64_t n = 0;
    double lambda = 0.0;
    std::uint32_t divisors = 0;
};

// Scans |lambda(n)| <= d(n) * (1 + 1e-9) for n <= limit; returns the first
// violation or nullopt. tables.limit must cover limit.
std::optional<DeligneViolation> verify_deligne(const EigenformTable& t,
                                               const arith::MultiplicativeTables& tables,
                                               std::int64_t limit, int threads = 0);

// CSV rows: n,a,lambda
void write_csv(const EigenformTable& t, std::ostream& os);

// Versioned binary cache keyed on (format version, weight, limit); big
// integers stored as sign + length-prefixed magnitude bytes.
void write_cache(const EigenformTable& t, const std::filesystem::path& file);
std::optional<EigenformTable> read_cache(const std::filesystem::path& file, int weight,
                                         std::int64_t limit);

}  // namespace tripower::eigenform
