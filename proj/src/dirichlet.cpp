#include "tripower/dirichlet.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "tripower/common.hpp"

namespace tripower::dirichlet {
namespace {

double pow_int(double x, int r) {
    double p = 1.0;
    for (int k = 0; k < r; ++k) p *= x;
    return p;
}

// Roots of the inverse local factor of L_r at p: for each n <= r/2 with
// multiplicity e_n = C(r,n) - C(r,n-1), the sym^{r-2n} Satake monomials,
// scaled by p for the (s-1)-shifted factor and by chi8(p) for the twist
// (chi8(p) = 0 drops the twisted factor entirely).
std::vector<std::complex<double>> l_r_roots(int r, const sympow::SatakeLocal& s) {
    if (r < 1) throw std::invalid_argument("l_r_roots: r must be >= 1");
    const int chi = arith::chi8(static_cast<std::uint64_t>(s.p));
    std::vector<std::complex<double>> roots;
    for (int n = 0; n <= r / 2; ++n) {
        const int m = r - 2 * n;
        const std::int64_t mult = binomial(r, n) - binomial(r, n - 1);
        for (std::int64_t c = 0; c < mult; ++c) {
            for (int j = 0; j <= m; ++j) {
                const auto unit = std::polar(1.0, s.theta * (m - 2 * j));
                roots.push_back(static_cast<double>(s.p) * unit);
                if (chi != 0) roots.push_back(static_cast<double>(chi) * unit);
            }
        }
    }
    return roots;
}

std::vector<double> real_project(const std::vector<std::complex<double>>& acc,
                                 const char* what) {
    std::vector<double> out(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k) {
        if (std::fabs(acc[k].imag()) > 1e-9 * (1.0 + std::fabs(acc[k].real())))
            throw std::runtime_error(std::string(what) + ": imaginary residue above tolerance");
        out[k] = acc[k].real();
    }
    return out;
}

double lambda_sigma_power(int r, const sympow::SatakeLocal& s) {
    const int chi = arith::chi8(static_cast<std::uint64_t>(s.p));
    return pow_int(s.lambda_p, r) * static_cast<double>(s.p + chi);
}

// Exact value of the local factor of U_r at x = p^{-sigma}:
// (1 + a x) * prod_roots (1 - rho x), a = lambda_p^r sigma(p). A finite
// polynomial, so no truncation enters the evaluation.
double u_r_local_value(int r, const sympow::SatakeLocal& s, double x) {
    std::complex<double> prod(1.0 + lambda_sigma_power(r, s) * x, 0.0);
    for (const auto& rho : l_r_roots(r, s)) prod *= (1.0 - rho * x);
    return prod.real();
}

struct KindInfo {
    double min_s;     // open lower bound of the convergence region
    int degree;       // number of unit-modulus inverse roots
    bool needs_form;  // requires lambda(p)
};

KindInfo kind_info(SeriesKind kind) {
    switch (kind) {
        case SeriesKind::zeta: return {1.0, 1, false};
        case SeriesKind::l_chi8: return {1.0, 1, false};
        case SeriesKind::hecke: return {1.0, 2, true};
        case SeriesKind::hecke_twisted: return {1.0, 2, true};
        case SeriesKind::sym2: return {1.0, 3, true};
        case SeriesKind::sym2_twisted: return {1.0, 3, true};
        case SeriesKind::u_r: return {1.5, 0, true};
    }
    throw std::invalid_argument("kind_info: unknown kind");
}

double local_log_factor(SeriesKind kind, double s_val, std::int64_t p, double lambda, int r,
                        int* sign_flips) {
    const double x = std::pow(static_cast<double>(p), -s_val);
    const int chi = arith::chi8(static_cast<std::uint64_t>(p));
    double denom = 1.0;
    switch (kind) {
        case SeriesKind::zeta:
            denom = 1.0 - x;
            break;
        case SeriesKind::l_chi8:
            denom = (chi == 0) ? 1.0 : 1.0 - chi * x;
            break;
        case SeriesKind::hecke:
            denom = 1.0 - lambda * x + x * x;
            break;
        case SeriesKind::hecke_twisted:
            denom = (chi == 0) ? 1.0 : 1.0 - lambda * chi * x + x * x;
            break;
        case SeriesKind::sym2:
            denom = (1.0 - x) * (1.0 - (lambda * lambda - 2.0) * x + x * x);
            break;
        case SeriesKind::sym2_twisted:
            denom = (chi == 0)
                        ? 1.0
                        : (1.0 - chi * x) * (1.0 - (lambda * lambda - 2.0) * chi * x + x * x);
            break;
        case SeriesKind::u_r: {
            const auto sat = sympow::SatakeLocal::from_lambda(p, lambda);
            const double v = u_r_local_value(r, sat, x);
            if (v == 0.0) throw std::runtime_error("euler_value: vanishing local factor");
            if (v < 0.0) ++*sign_flips;
            return std::log(std::fabs(v));
        }
    }
    // inverse local factor: value = 1/denom (positive for every kind above)
    return -std::log(denom);
}

// Rigorous tail: primes above the cutoff dominated by all integers above it.
double tail_bound_unit_roots(int degree, double s_val, std::int64_t prime_bound) {
    const double u_max = std::pow(static_cast<double>(prime_bound + 1), -s_val);
    const double zeta_tail =
        std::pow(static_cast<double>(prime_bound), 1.0 - s_val) / (s_val - 1.0);
    return degree * zeta_tail / (1.0 - u_max);
}

// Tail for U_r: the linear term of every local factor cancels exactly, the
// rest is majorized by (1+y)^D (1+cy) - 1 - (D+c) y with y = p^{1-s},
// c = 2^{r+1}, D = root count.
double tail_bound_u_r(int r, double s_val, std::int64_t prime_bound) {
    std::int64_t droots = 0;
    for (int n = 0; n <= r / 2; ++n)
        droots += (binomial(r, n) - binomial(r, n - 1)) * 2 * (r - 2 * n + 1);
    const double c = std::pow(2.0, r + 1);
    const double d = static_cast<double>(droots);
    const double y0 = std::pow(static_cast<double>(prime_bound + 1), 1.0 - s_val);
    const double h0 = std::pow(1.0 + y0, d) * (1.0 + c * y0) - 1.0 - (d + c) * y0;
    if (!(h0 < 1.0)) return std::numeric_limits<double>::infinity();
    const double k_quad = h0 / (y0 * y0);  // h(y) <= k_quad y^2 for y <= y0
    const double sum_sq =
        std::pow(static_cast<double>(prime_bound), 3.0 - 2.0 * s_val) / (2.0 * s_val - 3.0);
    return k_quad * sum_sq / (1.0 - h0);
}

EulerValue euler_product(SeriesKind kind, double s_val, std::int64_t prime_bound,
                         const arith::MultiplicativeTables& tables,
                         const eigenform::EigenformTable* table, int r, int threads,
                         bool heuristic_tail) {
    const KindInfo info = kind_info(kind);
    if (info.needs_form) {
        if (table == nullptr)
            throw std::invalid_argument("euler_value: eigenform table required for this kind");
        if (table->limit < prime_bound)
            throw std::invalid_argument("euler_value: eigenform table too small");
    }
    if (tables.limit < prime_bound)
        throw std::invalid_argument("euler_value: arithmetic tables too small");

    const auto& primes = tables.primes;
    std::size_t nprimes = 0;
    while (nprimes < primes.size() && primes[nprimes] <= prime_bound) ++nprimes;

    constexpr std::size_t kChunk = 1024;
    const std::int64_t nblocks =
        static_cast<std::int64_t>((nprimes + kChunk - 1) / kChunk);
    std::vector<Accum> partial(static_cast<std::size_t>(std::max<std::int64_t>(nblocks, 0)));
    std::vector<int> flips(partial.size(), 0);
    parallel_for_blocks(nblocks, threads, [&](std::int64_t b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kChunk;
        const std::size_t hi = std::min(nprimes, lo + kChunk);
        Accum acc;
        int sign_flips = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            const std::int64_t p = primes[i];
            const double lambda =
                info.needs_form ? table->lambda[static_cast<std::size_t>(p)] : 0.0;
            acc.add(local_log_factor(kind, s_val, p, lambda, r, &sign_flips));
        }
        partial[static_cast<std::size_t>(b)] = acc;
        flips[static_cast<std::size_t>(b)] = sign_flips;
    });

    Accum total;
    int sign_flips = 0;
    for (std::int64_t b = 0; b < nblocks; ++b) {
        total.add(partial[static_cast<std::size_t>(b)]);
        sign_flips += flips[static_cast<std::size_t>(b)];
    }

    EulerValue out;
    out.prime_bound = prime_bound;
    out.value = ((sign_flips % 2) ? -1.0 : 1.0) * std::exp(total.value());
    if (heuristic_tail) {
        // change over the last octave of primes, doubled
        const std::int64_t half = std::max<std::int64_t>(prime_bound / 2, 2);
        Accum recent;
        int unused = 0;
        for (std::size_t i = 0; i < nprimes; ++i) {
            const std::int64_t p = primes[i];
            if (p <= half) continue;
            const double lambda =
                info.needs_form ? table->lambda[static_cast<std::size_t>(p)] : 0.0;
            recent.add(local_log_factor(kind, s_val, p, lambda, r, &unused));
        }
        out.tail_bound = 2.0 * std::fabs(recent.value());
        out.tail_heuristic = true;
    } else if (kind == SeriesKind::u_r) {
        out.tail_bound = tail_bound_u_r(r, s_val, prime_bound);
    } else {
        out.tail_bound = tail_bound_unit_roots(info.degree, s_val, prime_bound);
    }
    return out;
}

}  // namespace

EulerValue combine(std::initializer_list<EulerValue> factors) {
    EulerValue out;
    out.value = 1.0;
    out.tail_bound = 0.0;
    out.prime_bound = 0;
    for (const EulerValue& f : factors) {
        out.value *= f.value;
        out.tail_bound += f.tail_bound;
        out.tail_heuristic = out.tail_heuristic || f.tail_heuristic;
        out.prime_bound = out.prime_bound == 0 ? f.prime_bound
                                               : std::min(out.prime_bound, f.prime_bound);
    }
    return out;
}

LocalFactor local_L_r(int r, const sympow::SatakeLocal& s, int degree) {
    if (r < 1 || degree < 1) throw std::invalid_argument("local_L_r: need r >= 1, degree >= 1");
    const std::size_t n = static_cast<std::size_t>(degree) + 1;
    std::vector<std::complex<double>> acc(n, 0.0);
    acc[0] = 1.0;
    for (const auto& rho : l_r_roots(r, s)) {
        for (std::size_t k = 1; k < n; ++k) acc[k] += rho * acc[k - 1];
    }
    LocalFactor out{s.p, real_project(acc, "local_L_r")};
    out.coeffs[0] = 1.0;
    return out;
}

LocalFactor local_U_r(int r, const sympow::SatakeLocal& s, int degree) {
    if (r < 1 || degree < 1) throw std::invalid_argument("local_U_r: need r >= 1, degree >= 1");
    const std::size_t n = static_cast<std::size_t>(degree) + 1;

    // A: the finite inverse polynomial of L_r, truncated
    std::vector<std::complex<double>> a(n, 0.0);
    a[0] = 1.0;
    for (const auto& rho : l_r_roots(r, s)) {
        for (std::size_t k = n; k-- > 1;) a[k] -= rho * a[k - 1];
    }
    const std::vector<double> a_real = real_project(a, "local_U_r");

    const double lam_sig = lambda_sigma_power(r, s);
    LocalFactor out{s.p, std::vector<double>(n, 0.0)};
    out.coeffs[0] = 1.0;
    if (n > 1) out.coeffs[1] = 0.0;  // A(p) + lambda^r sigma(p) cancels exactly
    for (std::size_t k = 2; k < n; ++k)
        out.coeffs[k] = a_real[k] + lam_sig * a_real[k - 1];
    return out;
}

EulerValue euler_value(SeriesKind kind, double s_val, std::int64_t prime_bound,
                       const arith::MultiplicativeTables& tables,
                       const eigenform::EigenformTable* table, int r, int threads) {
    const KindInfo info = kind_info(kind);
    if (!(s_val > info.min_s))
        throw std::invalid_argument("euler_value: s outside the absolute-convergence region");
    if (prime_bound < 2) throw std::invalid_argument("euler_value: prime_bound too small");
    return euler_product(kind, s_val, prime_bound, tables, table, r, threads, false);
}

EulerValue sym2_edge_value(std::int64_t prime_bound, const arith::MultiplicativeTables& tables,
                           const eigenform::EigenformTable& table, int threads) {
    return euler_product(SeriesKind::sym2, 1.0, prime_bound, tables, &table, 2, threads, true);
}

ConstantC constant_C(std::int64_t prime_bound, const arith::MultiplicativeTables& tables,
                     const eigenform::EigenformTable& table, std::int64_t sym2_edge_prime_bound,
                     int threads) {
    if (prime_bound < 100) throw std::invalid_argument("constant_C: prime_bound must be >= 100");
    if (sym2_edge_prime_bound <= 0)
        sym2_edge_prime_bound = std::max<std::int64_t>(prime_bound, 1000000);
    sym2_edge_prime_bound = std::min({sym2_edge_prime_bound, tables.limit, table.limit});

    ConstantC c;
    c.l2_chi8 = euler_value(SeriesKind::l_chi8, 2.0, prime_bound, tables, nullptr, 2, threads);
    c.l1_sym2 = sym2_edge_value(sym2_edge_prime_bound, tables, table, threads);
    c.l2_sym2_chi8 =
        euler_value(SeriesKind::sym2_twisted, 2.0, prime_bound, tables, &table, 2, threads);
    c.u2 = euler_value(SeriesKind::u_r, 2.0, prime_bound, tables, &table, 2, threads);
    c.total = combine({c.l2_chi8, c.l1_sym2, c.l2_sym2_chi8, c.u2});
    return c;
}

}  // namespace tripower::dirichlet
