#include "tripower/arith.hpp"

#include <cstring>
#include <fstream>
#include <ostream>

#include "tripower/common.hpp"

namespace tripower::arith {
namespace {

constexpr char kMagic[8] = {'T', 'P', 'T', 'A', 'B', '0', '1', '\n'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
bool get(std::istream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return bool(is);
}

template <typename T>
void put_vec(std::ostream& os, const std::vector<T>& v) {
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <typename T>
bool get_vec(std::istream& is, std::vector<T>& v, std::size_t n) {
    v.resize(n);
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
    return bool(is);
}

}  // namespace

MultiplicativeTables build_tables(std::int64_t limit, std::int64_t memory_budget_bytes) {
    if (limit < 1) throw std::invalid_argument("build_tables: limit must be >= 1");
    // ~30 bytes/entry including the transient sieve state
    if (limit > memory_budget_bytes / 30)
        throw resource_limit_error("build_tables: limit exceeds memory budget");

    const std::size_t n = static_cast<std::size_t>(limit) + 1;
    MultiplicativeTables t;
    t.limit = limit;
    t.chi8_tab.resize(n);
    t.sigma.assign(n, 0);
    t.squarefree.assign(n, 1);
    t.divcount.assign(n, 0);

    for (std::size_t i = 1; i < n; ++i)
        t.chi8_tab[i] = static_cast<std::int8_t>(chi8(i));

    // Linear sieve keeping, per n, the smallest prime p and the p-power part
    // low[n] = p^e. Multiplicative values split as f(n) = f(p^e) * f(n / p^e).
    std::vector<std::int64_t> low(n, 0);
    std::vector<std::int32_t> spf(n, 0);
    t.sigma[1] = 1;
    t.divcount[1] = 1;
    low[1] = 1;
    for (std::int64_t i = 2; i <= limit; ++i) {
        if (spf[i] == 0) {
            spf[i] = static_cast<std::int32_t>(std::min<std::int64_t>(i, INT32_MAX));
            low[i] = i;
            t.primes.push_back(i);
            t.sigma[i] = i + chi8(static_cast<std::uint64_t>(i));
            t.divcount[i] = 2;
        }
        for (std::int64_t p : t.primes) {
            if (p > spf[i] || i * p > limit) break;
            const std::int64_t ip = i * p;
            spf[ip] = static_cast<std::int32_t>(p);
            if (i % p == 0) {
                low[ip] = low[i] * p;
                t.squarefree[ip] = 0;
            } else {
                low[ip] = p;
                t.squarefree[ip] = t.squarefree[i];
            }
            const std::int64_t pe = low[ip];
            if (ip == pe) {
                // prime power: sigma(p^e) = p * sigma(p^(e-1)) + chi8(p^e)
                t.sigma[ip] = p * t.sigma[ip / p] + chi8(static_cast<std::uint64_t>(ip));
                t.divcount[ip] = t.divcount[ip / p] + 1;
            } else {
                t.sigma[ip] = t.sigma[pe] * t.sigma[ip / pe];
                t.divcount[ip] = t.divcount[pe] * t.divcount[ip / pe];
            }
        }
    }
    return t;
}

void write_csv(const MultiplicativeTables& t, std::ostream& os) {
    os << "n,chi8,sigma,squarefree,divcount\n";
    for (std::int64_t i = 1; i <= t.limit; ++i) {
        os << i << ',' << int(t.chi8_tab[i]) << ',' << t.sigma[i] << ','
           << int(t.squarefree[i]) << ',' << t.divcount[i] << '\n';
    }
}

void write_cache(const MultiplicativeTables& t, const std::filesystem::path& file) {
    std::ofstream os(file, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("write_cache: cannot open " + file.string());
    os.write(kMagic, sizeof(kMagic));
    put(os, kVersion);
    put(os, t.limit);
    put_vec(os, t.chi8_tab);
    put_vec(os, t.sigma);
    put_vec(os, t.squarefree);
    put_vec(os, t.divcount);
    const std::uint64_t np = t.primes.size();
    put(os, np);
    put_vec(os, t.primes);
    if (!os) throw std::runtime_error("write_cache: write failed for " + file.string());
}

std::optional<MultiplicativeTables> read_cache(const std::filesystem::path& file,
                                               std::int64_t limit) {
    std::ifstream is(file, std::ios::binary);
    if (!is) return std::nullopt;
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) return std::nullopt;
    std::uint32_t version = 0;
    std::int64_t stored_limit = 0;
    if (!get(is, version) || version != kVersion) return std::nullopt;
    if (!get(is, stored_limit) || stored_limit != limit) return std::nullopt;

    MultiplicativeTables t;
    t.limit = stored_limit;
    const std::size_t n = static_cast<std::size_t>(stored_limit) + 1;
    if (!get_vec(is, t.chi8_tab, n)) return std::nullopt;
    if (!get_vec(is, t.sigma, n)) return std::nullopt;
    if (!get_vec(is, t.squarefree, n)) return std::nullopt;
    if (!get_vec(is, t.divcount, n)) return std::nullopt;
    std::uint64_t np = 0;
    if (!get(is, np)) return std::nullopt;
    if (!get_vec(is, t.primes, np)) return std::nullopt;
    return t;
}

}  // namespace tripower::arith
