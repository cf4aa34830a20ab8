#include "tripower/eigenform.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <ostream>

#include "tripower/common.hpp"
#include "tripower/kernels.hpp"
#include "tripower/ntt.hpp"

namespace tripower::eigenform {
namespace {

using ntt::u128;
using ntt::u64;

enum class Eis { e4, e6 };

// Eisenstein factors realizing each one-dimensional weight on top of the
// weight-12 base series.
const std::vector<Eis>& eisenstein_factors(int weight) {
    static const std::vector<Eis> w12{};
    static const std::vector<Eis> w16{Eis::e4};
    static const std::vector<Eis> w18{Eis::e6};
    static const std::vector<Eis> w20{Eis::e4, Eis::e4};
    static const std::vector<Eis> w22{Eis::e4, Eis::e6};
    static const std::vector<Eis> w26{Eis::e4, Eis::e4, Eis::e6};
    switch (weight) {
        case 12: return w12;
        case 16: return w16;
        case 18: return w18;
        case 20: return w20;
        case 22: return w22;
        case 26: return w26;
        default: break;
    }
    throw std::invalid_argument("eigenform: unsupported weight " + std::to_string(weight) +
                                " (supported: 12 16 18 20 22 26)");
}

// sigma_3 in u64 and sigma_5 in u128, exact, for n < size.
struct DivisorPowerSums {
    std::vector<u64> s3;
    std::vector<u128> s5;
};

DivisorPowerSums divisor_power_sums(std::size_t size) {
    DivisorPowerSums d;
    d.s3.assign(size, 0);
    d.s5.assign(size, 0);
    for (std::size_t div = 1; div < size; ++div) {
        const u64 d3 = static_cast<u64>(div) * div * div;
        const u128 d5 = u128(d3) * div * div;
        for (std::size_t m = div; m < size; m += div) {
            d.s3[m] += d3;
            d.s5[m] += d5;
        }
    }
    return d;
}

int moduli_needed(int weight, std::int64_t limit) {
    // |a(n)| <= d(n) n^((weight-1)/2); 14 bits absorb d(n) for n <= 10^9,
    // plus sign bit and slack.
    const double bits =
        16.0 + 0.5 * (weight - 1) * std::log2(static_cast<double>(std::max<std::int64_t>(limit, 2)));
    const int k = std::max(2, static_cast<int>(bits / 61.0) + 1);
    if (k > static_cast<int>(ntt::kModuli.size()))
        throw resource_limit_error("eigenform: coefficient size exceeds CRT capacity");
    return k;
}

std::vector<u64> eta3_dense_mod(std::int64_t degree_count, const ntt::FieldOps& f) {
    std::vector<u64> a(static_cast<std::size_t>(degree_count), 0);
    for (std::int64_t k = 0;; ++k) {
        const std::int64_t e = k * (k + 1) / 2;
        if (e >= degree_count) break;
        const std::int64_t coeff = (k % 2 == 0) ? (2 * k + 1) : -(2 * k + 1);
        a[static_cast<std::size_t>(e)] = f.reduce_i64(coeff);
    }
    return a;
}

std::vector<u64> eisenstein_mod(Eis kind, std::size_t size, const DivisorPowerSums& pows,
                                const ntt::FieldOps& f) {
    std::vector<u64> e(size, 0);
    e[0] = 1;
    if (kind == Eis::e4) {
        for (std::size_t n = 1; n < size; ++n)
            e[n] = f.mul(240 % f.p, pows.s3[n] % f.p);
    } else {
        for (std::size_t n = 1; n < size; ++n)
            e[n] = f.sub(0, f.mul(504 % f.p, static_cast<u64>(pows.s5[n] % f.p)));
    }
    return e;
}

EigenformTable build(int weight, std::int64_t limit, const BuildOptions& opt) {
    const auto& factors = eisenstein_factors(weight);
    if (limit < 1) throw std::invalid_argument("eigenform: limit must be >= 1");

    const int k = moduli_needed(weight, limit);
    const std::size_t n_coeffs = static_cast<std::size_t>(limit);  // exponents 0..limit-1
    const std::size_t transform = n_coeffs <= 1 ? 1 : std::bit_ceil(2 * n_coeffs - 1);
    if (transform > ntt::kMaxTransform)
        throw resource_limit_error("eigenform: limit exceeds transform capacity");
    // residues + two transform scratch arrays per modulus, plus ~56 B per mpz
    const std::int64_t est_bytes =
        static_cast<std::int64_t>(k) * static_cast<std::int64_t>(transform) * 8 * 3 +
        limit * 64;
    if (est_bytes > opt.memory_budget_bytes)
        throw resource_limit_error("eigenform: limit exceeds memory budget");

    DivisorPowerSums pows;
    if (!factors.empty()) pows = divisor_power_sums(n_coeffs);

    // Per modulus: eta^3 dense, three squarings to eta^24, then the
    // Eisenstein products. Moduli are independent, so they run in parallel.
    std::vector<std::vector<u64>> residues(static_cast<std::size_t>(k));
    parallel_for_blocks(k, opt.threads, [&](std::int64_t j) {
        const ntt::Transformer tr(ntt::kModuli[static_cast<std::size_t>(j)]);
        std::vector<u64> cur = eta3_dense_mod(static_cast<std::int64_t>(n_coeffs), tr.field());
        for (int pass = 0; pass < 3; ++pass) cur = tr.square(std::move(cur), n_coeffs);
        for (Eis e : factors) {
            auto eis = eisenstein_mod(e, n_coeffs, pows, tr.field());
            cur = tr.multiply(std::move(cur), std::move(eis), n_coeffs);
        }
        cur.resize(n_coeffs, 0);
        residues[static_cast<std::size_t>(j)] = std::move(cur);
    });

    EigenformTable t;
    t.weight = weight;
    t.limit = limit;
    std::vector<mpz_class> coeffs = ntt::crt_signed(residues);
    residues.clear();
    residues.shrink_to_fit();

    // a(n) sits at exponent n-1 of the eta^24 * E... series
    t.a.resize(static_cast<std::size_t>(limit) + 1);
    for (std::int64_t n = 1; n <= limit; ++n)
        t.a[static_cast<std::size_t>(n)] = std::move(coeffs[static_cast<std::size_t>(n - 1)]);

    t.lambda.assign(static_cast<std::size_t>(limit) + 1, 0.0);
    const double half_weight = 0.5 * (weight - 1);
    for (std::int64_t n = 1; n <= limit; ++n) {
        t.lambda[static_cast<std::size_t>(n)] =
            mpz_get_d(t.a[static_cast<std::size_t>(n)].get_mpz_t()) /
            std::pow(static_cast<double>(n), half_weight);
    }
    return t;
}

constexpr char kMagic[8] = {'T', 'P', 'E', 'I', 'G', '0', '1', '\n'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

const std::vector<int>& supported_weights() {
    static const std::vector<int> w{12, 16, 18, 20, 22, 26};
    return w;
}

std::vector<std::pair<std::int64_t, std::int64_t>> eta3_series(std::int64_t limit) {
    if (limit < 1) throw std::invalid_argument("eta3_series: limit must be >= 1");
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (std::int64_t k = 0;; ++k) {
        const std::int64_t e = k * (k + 1) / 2;
        if (e > limit) break;
        out.emplace_back(e, (k % 2 == 0) ? (2 * k + 1) : -(2 * k + 1));
    }
    return out;
}

EigenformTable delta_coefficients(std::int64_t limit, const BuildOptions& opt) {
    return build(12, limit, opt);
}

EigenformTable eigenform_coefficients(int weight, std::int64_t limit, const BuildOptions& opt) {
    return build(weight, limit, opt);
}

bool verify_hecke(const EigenformTable& t, std::int64_t m, std::int64_t n) {
    if (m < 1 || n < 1 || m > t.limit || n > t.limit || m * n > t.limit)
        throw std::invalid_argument("verify_hecke: indices out of range");
    const mpz_class lhs = t.a[static_cast<std::size_t>(m)] * t.a[static_cast<std::size_t>(n)];
    mpz_class rhs = 0;
    const std::int64_t g = std::gcd(m, n);
    for (std::int64_t d = 1; d <= g; ++d) {
        if (g % d != 0) continue;
        mpz_class dw;
        mpz_ui_pow_ui(dw.get_mpz_t(), static_cast<unsigned long>(d),
                      static_cast<unsigned long>(t.weight - 1));
        rhs += dw * t.a[static_cast<std::size_t>(m * n / (d * d))];
    }
    return lhs == rhs;
}

std::optional<DeligneViolation> verify_deligne(const EigenformTable& t,
                                               const arith::MultiplicativeTables& tables,
                                               std::int64_t limit, int threads) {
    if (limit > t.limit || limit > tables.limit)
        throw std::invalid_argument("verify_deligne: limit exceeds table range");
    constexpr double kSlack = 1.0 + 1e-9;
    const auto& ker = kernels::active_kernels();

    const std::int64_t nblocks =
        (limit + static_cast<std::int64_t>(kernels::kBlock) - 1) /
        static_cast<std::int64_t>(kernels::kBlock);
    std::vector<std::uint8_t> flagged(static_cast<std::size_t>(nblocks), 0);
    parallel_for_blocks(nblocks, threads, [&](std::int64_t b) {
        const std::int64_t lo = 1 + b * static_cast<std::int64_t>(kernels::kBlock);
        const std::int64_t hi =
            std::min<std::int64_t>(limit, lo + static_cast<std::int64_t>(kernels::kBlock) - 1);
        const double worst = ker.max_abs_ratio(t.lambda.data() + lo, tables.divcount.data() + lo,
                                               static_cast<std::size_t>(hi - lo + 1));
        if (worst > kSlack) flagged[static_cast<std::size_t>(b)] = 1;
    });
    for (std::int64_t b = 0; b < nblocks; ++b) {
        if (!flagged[static_cast<std::size_t>(b)]) continue;
        const std::int64_t lo = 1 + b * static_cast<std::int64_t>(kernels::kBlock);
        const std::int64_t hi =
            std::min<std::int64_t>(limit, lo + static_cast<std::int64_t>(kernels::kBlock) - 1);
        for (std::int64_t n = lo; n <= hi; ++n) {
            const double lam = t.lambda[static_cast<std::size_t>(n)];
            const double bound = static_cast<double>(tables.divcount[static_cast<std::size_t>(n)]);
            if (std::fabs(lam) > bound * kSlack)
                return DeligneViolation{n, lam, tables.divcount[static_cast<std::size_t>(n)]};
        }
    }
    return std::nullopt;
}

void write_csv(const EigenformTable& t, std::ostream& os) {
    os << "n,a,lambda\n";
    for (std::int64_t n = 1; n <= t.limit; ++n) {
        os << n << ',' << t.a[static_cast<std::size_t>(n)].get_str() << ','
           << format_double(t.lambda[static_cast<std::size_t>(n)]) << '\n';
    }
}

void write_cache(const EigenformTable& t, const std::filesystem::path& file) {
    std::ofstream os(file, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("write_cache: cannot open " + file.string());
    os.write(kMagic, sizeof(kMagic));
    const std::uint32_t version = kVersion;
    const std::uint32_t weight = static_cast<std::uint32_t>(t.weight);
    const std::uint32_t encoding = 1;  // sign + length-prefixed LE magnitude
    os.write(reinterpret_cast<const char*>(&version), 4);
    os.write(reinterpret_cast<const char*>(&weight), 4);
    os.write(reinterpret_cast<const char*>(&encoding), 4);
    os.write(reinterpret_cast<const char*>(&t.limit), 8);
    std::vector<unsigned char> buf;
    for (std::int64_t n = 1; n <= t.limit; ++n) {
        const mpz_class& v = t.a[static_cast<std::size_t>(n)];
        const std::int32_t sign = static_cast<std::int32_t>(mpz_sgn(v.get_mpz_t()));
        std::size_t bytes = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
        if (sign == 0) bytes = 0;
        buf.resize(std::max<std::size_t>(bytes, 1));
        std::size_t written = 0;
        if (bytes > 0)
            mpz_export(buf.data(), &written, -1, 1, 0, 0, v.get_mpz_t());
        const std::uint32_t len = static_cast<std::uint32_t>(written);
        os.write(reinterpret_cast<const char*>(&sign), 4);
        os.write(reinterpret_cast<const char*>(&len), 4);
        if (len) os.write(reinterpret_cast<const char*>(buf.data()), len);
    }
    if (!os) throw std::runtime_error("write_cache: write failed for " + file.string());
}

std::optional<EigenformTable> read_cache(const std::filesystem::path& file, int weight,
                                         std::int64_t limit) {
    std::ifstream is(file, std::ios::binary);
    if (!is) return std::nullopt;
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) return std::nullopt;
    std::uint32_t version = 0, stored_weight = 0, encoding = 0;
    std::int64_t stored_limit = 0;
    is.read(reinterpret_cast<char*>(&version), 4);
    is.read(reinterpret_cast<char*>(&stored_weight), 4);
    is.read(reinterpret_cast<char*>(&encoding), 4);
    is.read(reinterpret_cast<char*>(&stored_limit), 8);
    if (!is || version != kVersion || encoding != 1) return std::nullopt;
    if (stored_weight != static_cast<std::uint32_t>(weight) || stored_limit != limit)
        return std::nullopt;

    EigenformTable t;
    t.weight = weight;
    t.limit = limit;
    t.a.resize(static_cast<std::size_t>(limit) + 1);
    t.lambda.assign(static_cast<std::size_t>(limit) + 1, 0.0);
    std::vector<unsigned char> buf;
    const double half_weight = 0.5 * (weight - 1);
    for (std::int64_t n = 1; n <= limit; ++n) {
        std::int32_t sign = 0;
        std::uint32_t len = 0;
        is.read(reinterpret_cast<char*>(&sign), 4);
        is.read(reinterpret_cast<char*>(&len), 4);
        if (!is) return std::nullopt;
        mpz_class v = 0;
        if (len) {
            buf.resize(len);
            is.read(reinterpret_cast<char*>(buf.data()), len);
            if (!is) return std::nullopt;
            mpz_import(v.get_mpz_t(), len, -1, 1, 0, 0, buf.data());
            if (sign < 0) v = -v;
        }
        t.lambda[static_cast<std::size_t>(n)] =
            mpz_get_d(v.get_mpz_t()) / std::pow(static_cast<double>(n), half_weight);
        t.a[static_cast<std::size_t>(n)] = std::move(v);
    }
    return t;
}

}  // namespace tripower::eigenform
