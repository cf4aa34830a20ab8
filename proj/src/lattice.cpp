#include "tripower/lattice.hpp"

#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "tripower/common.hpp"

namespace tripower::lattice {
namespace {

constexpr std::int64_t kCoordCap = std::int64_t(1) << 29;

std::int64_t tri(std::int64_t x) { return x * (x + 1) / 2; }

// Largest k >= 0 with k(k+1)/2 <= v.
std::int64_t tri_floor(std::int64_t v) {
    if (v < 0) return -1;
    std::int64_t k = (isqrt64(8 * v + 1) - 1) / 2;
    while (tri(k + 1) <= v) ++k;
    while (k >= 0 && tri(k) > v) --k;
    return k;
}

// Value/multiplicity table of one coordinate restricted to values <= cap.
// Triangular terms: T(k) = T(-1-k), every value twice. Square terms: k^2 and
// (-k)^2, apex k = 0 once.
std::vector<std::pair<std::int64_t, std::int64_t>> coord_values(const CoordTerm& t,
                                                                std::int64_t cap) {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (std::int64_t k = 0;; ++k) {
        const std::int64_t base = t.triangular ? tri(k) : k * k;
        const std::int64_t v = t.coeff * base;
        if (v > cap) break;
        out.emplace_back(v, t.triangular ? 2 : (k == 0 ? 1 : 2));
    }
    return out;
}

}  // namespace

PolyKind parse_poly_kind(std::string_view name) {
    if (name == "alpha") return PolyKind::alpha;
    if (name == "alpha1") return PolyKind::alpha1;
    if (name == "alpha2") return PolyKind::alpha2;
    throw std::invalid_argument("unknown polynomial: " + std::string(name));
}

const char* poly_name(PolyKind kind) {
    switch (kind) {
        case PolyKind::alpha: return "alpha";
        case PolyKind::alpha1: return "alpha1";
        case PolyKind::alpha2: return "alpha2";
    }
    return "?";
}

PolynomialSpec PolynomialSpec::make(PolyKind kind) {
    PolynomialSpec s;
    s.kind = kind;
    switch (kind) {
        case PolyKind::alpha:
            // T(x1) + T(x2) + 2 T(x3) + 4 T(x4)
            s.terms = {CoordTerm{1, true}, CoordTerm{1, true}, CoordTerm{2, true},
                       CoordTerm{4, true}};
            break;
        case PolyKind::alpha1:
            // x1^2 + 2 x2^2 + 4 T(x3) + 4 T(x4)
            s.terms = {CoordTerm{1, false}, CoordTerm{2, false}, CoordTerm{4, true},
                       CoordTerm{4, true}};
            break;
        case PolyKind::alpha2:
            // x1^2 + 2 T(x2) + 2 T(x3) + 4 T(x4)
            s.terms = {CoordTerm{1, false}, CoordTerm{2, true}, CoordTerm{2, true},
                       CoordTerm{4, true}};
            break;
    }
    return s;
}

std::int64_t poly_value(const PolynomialSpec& spec, const std::array<std::int64_t, 4>& x) {
    std::int64_t acc = 0;
    for (int i = 0; i < 4; ++i) {
        if (x[i] <= -kCoordCap || x[i] >= kCoordCap)
            throw std::invalid_argument("poly_value: coordinate too large");
        const auto& t = spec.terms[static_cast<std::size_t>(i)];
        acc += t.coeff * (t.triangular ? tri(x[static_cast<std::size_t>(i)])
                                       : x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)]);
    }
    return acc;
}

RepTable rep_counts(const PolynomialSpec& spec, std::int64_t limit, std::int64_t budget_bytes) {
    if (limit < 0) throw std::invalid_argument("rep_counts: limit must be >= 0");
    if (limit > budget_bytes / 16)
        throw resource_limit_error("rep_counts: limit exceeds memory budget");

    RepTable t;
    t.spec = spec;
    t.limit = limit;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(limit) + 1, 0);
    counts[0] = 1;
    std::vector<std::int64_t> next(counts.size());
    for (const CoordTerm& term : spec.terms) {
        std::fill(next.begin(), next.end(), 0);
        for (const auto& [value, mult] : coord_values(term, limit)) {
            const std::size_t v = static_cast<std::size_t>(value);
            for (std::size_t i = 0; i + v < counts.size(); ++i) {
                if (counts[i]) next[i + v] += mult * counts[i];
            }
        }
        counts.swap(next);
    }
    t.counts = std::move(counts);
    return t;
}

RepIdentityResult verify_rep_identity(const RepTable& table,
                                      const arith::MultiplicativeTables& tables) {
    const std::int64_t n_max = table.limit + 1;
    if (tables.limit < n_max)
        throw std::invalid_argument("verify_rep_identity: sigma table too small");

    RepIdentityResult res;
    // candidate from n = 1: counts[0] / sigma(1) = counts[0]
    std::int64_t num = table.counts[0];
    std::int64_t den = 1;
    if (num <= 0) {
        res.failure = RepInconsistency{1, table.counts[0], tables.sigma[1]};
        return res;
    }
    const std::int64_t g = std::gcd(num, den);
    num /= g;
    den /= g;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        const std::int64_t count = table.counts[static_cast<std::size_t>(n - 1)];
        const std::int64_t sig = tables.sigma[static_cast<std::size_t>(n)];
        // counts[n-1] * den == num * sigma(n), in 128-bit to be safe
        if (static_cast<__int128>(count) * den != static_cast<__int128>(num) * sig) {
            res.failure = RepInconsistency{n, count, sig};
            return res;
        }
    }
    res.ok = true;
    res.c_num = num;
    res.c_den = den;
    return res;
}

RepIdentityResult verify_rep_identity(const PolynomialSpec& spec, std::int64_t limit,
                                      const arith::MultiplicativeTables& tables) {
    if (limit < 2) throw std::invalid_argument("verify_rep_identity: limit must be >= 2");
    return verify_rep_identity(rep_counts(spec, limit), tables);
}

void enumerate_values(
    const PolynomialSpec& spec, std::int64_t bound,
    const std::function<void(std::int64_t, const std::array<std::int64_t, 4>&)>& fn) {
    if (bound <= 0) return;
    const std::int64_t cap = bound - 1;  // spec(x) <= bound - 1

    // per-coordinate range with term value <= cap
    std::array<std::int64_t, 4> lo{}, hi{};
    for (int i = 0; i < 4; ++i) {
        const auto& t = spec.terms[static_cast<std::size_t>(i)];
        if (t.triangular) {
            const std::int64_t k = tri_floor(cap / t.coeff);
            lo[static_cast<std::size_t>(i)] = -1 - k;
            hi[static_cast<std::size_t>(i)] = k;
        } else {
            const std::int64_t k = isqrt64(cap / t.coeff);
            lo[static_cast<std::size_t>(i)] = -k;
            hi[static_cast<std::size_t>(i)] = k;
        }
    }

    std::array<std::int64_t, 4> x{};
    auto term_value = [&](int i) {
        const auto& t = spec.terms[static_cast<std::size_t>(i)];
        const std::int64_t v = x[static_cast<std::size_t>(i)];
        return t.coeff * (t.triangular ? tri(v) : v * v);
    };
    for (x[0] = lo[0]; x[0] <= hi[0]; ++x[0]) {
        const std::int64_t v0 = term_value(0);
        if (v0 > cap) continue;
        for (x[1] = lo[1]; x[1] <= hi[1]; ++x[1]) {
            const std::int64_t v1 = v0 + term_value(1);
            if (v1 > cap) continue;
            for (x[2] = lo[2]; x[2] <= hi[2]; ++x[2]) {
                const std::int64_t v2 = v1 + term_value(2);
                if (v2 > cap) continue;
                for (x[3] = lo[3]; x[3] <= hi[3]; ++x[3]) {
                    const std::int64_t v3 = v2 + term_value(3);
                    if (v3 > cap) continue;
                    fn(v3, x);
                }
            }
        }
    }
}

void write_csv(const RepTable& table, const arith::MultiplicativeTables& tables,
               std::ostream& os) {
    if (tables.limit < table.limit + 1)
        throw std::invalid_argument("write_csv: sigma table too small");
    os << "n,delta4,sigma_next,ratio\n";
    for (std::int64_t n = 0; n <= table.limit; ++n) {
        const std::int64_t count = table.counts[static_cast<std::size_t>(n)];
        const std::int64_t sig = tables.sigma[static_cast<std::size_t>(n + 1)];
        os << n << ',' << count << ',' << sig << ','
           << format_double(sig == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(sig))
           << '\n';
    }
}

}  // namespace tripower::lattice
