#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace tripower::arith {

// chi8: real character mod 8, (8/n) as a Jacobi symbol.
// +1 at n = 1,7 (mod 8); -1 at n = 3,5 (mod 8); 0 at even n.
inline int chi8(std::uint64_t n) {
    static constexpr int table[8] = {0, 1, 0, -1, 0, -1, 0, 1};
    return table[n & 7u];
}

// Sieved arithmetic functions over 1..limit, built once, then immutable.
//   chi8_tab[n]   : chi8(n)
//   sigma[n]      : sum_{d|n} chi8(d) * (n/d), exact in int64
//   squarefree[n] : 1 iff no prime square divides n
//   divcount[n]   : number of positive divisors
struct MultiplicativeTables {
    std::int64_t limit = 0;
    std::vector<std::int8_t> chi8_tab;
    std::vector<std::int64_t> sigma;
    std::vector<std::uint8_t> squarefree;
    std::vector<std::uint32_t> divcount;
    std::vector<std::int64_t> primes;
};

inline constexpr std::int64_t kDefaultTableBudget = std::int64_t(2) << 30;

// Linear (smallest-prime-factor) sieve. Throws std::invalid_argument for
// limit < 1 and resource_limit_error when the table would exceed the budget.
MultiplicativeTables build_tables(std::int64_t limit,
                                  std::int64_t memory_budget_bytes = kDefaultTableBudget);

// CSV rows: n,chi8,sigma,squarefree,divcount
void write_csv(const MultiplicativeTables& t, std::ostream& os);

// Versioned binary cache keyed on (format version, limit). read_cache
// returns nullopt on missing file, magic/version mismatch, or limit mismatch.
void write_cache(const MultiplicativeTables& t, const std::filesystem::path& file);
std::optional<MultiplicativeTables> read_cache(const std::filesystem::path& file,
                                               std::int64_t limit);

}  // namespace tripower::arith
