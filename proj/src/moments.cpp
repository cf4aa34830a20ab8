#include "tripower/moments.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "tripower/common.hpp"
#include "tripower/kernels.hpp"

namespace tripower::moments {
namespace {

double pow_int(double x, int r) {
    double p = 1.0;
    for (int k = 0; k < r; ++k) p *= x;
    return p;
}

struct OlsFit {
    double slope = 0.0;
    double slope_stderr = 0.0;
    int points = 0;
};

OlsFit ols(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    OlsFit fit;
    fit.points = static_cast<int>(n);
    fit.slope = sxy / sxx;
    const double intercept = my - fit.slope * mx;
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = ys[i] - (intercept + fit.slope * xs[i]);
        sse += e * e;
    }
    fit.slope_stderr = n > 2 ? std::sqrt(sse / static_cast<double>(n - 2) / sxx) : 0.0;
    return fit;
}

}  // namespace

Method parse_method(std::string_view name) {
    if (name == "sieve") return Method::sieve;
    if (name == "lattice") return Method::lattice;
    throw std::invalid_argument("unknown method: " + std::string(name));
}

const char* method_name(Method m) { return m == Method::sieve ? "sieve" : "lattice"; }

std::vector<std::int64_t> checkpoint_schedule(std::int64_t x_min, std::int64_t x_max,
                                              int per_decade) {
    if (x_min < 1 || x_max < x_min || per_decade < 1)
        throw std::invalid_argument("checkpoint_schedule: bad range");
    std::vector<std::int64_t> xs;
    const double lo = std::log10(static_cast<double>(x_min));
    const std::int64_t k0 = static_cast<std::int64_t>(std::floor(lo * per_decade));
    for (std::int64_t k = k0;; ++k) {
        const double v = std::pow(10.0, static_cast<double>(k) / per_decade);
        const std::int64_t x = static_cast<std::int64_t>(std::ceil(v));
        if (x < x_min) continue;
        if (x >= x_max) break;
        if (xs.empty() || xs.back() != x) xs.push_back(x);
    }
    if (xs.empty() || xs.front() != x_min) xs.insert(xs.begin(), x_min);
    if (xs.back() != x_max) xs.push_back(x_max);
    return xs;
}

double moment_sum_sieve(int r, std::int64_t X, const arith::MultiplicativeTables& tables,
                        const eigenform::EigenformTable& form, int threads) {
    if (r < 1) throw std::invalid_argument("moment_sum_sieve: r must be >= 1");
    if (X < 1 || X > form.limit || X > tables.limit)
        throw std::invalid_argument("moment_sum_sieve: X outside table range");

    constexpr std::int64_t B = static_cast<std::int64_t>(kernels::kBlock);
    const auto& ker = kernels::active_kernels();
    const std::int64_t nblocks = (X + B - 1) / B;
    std::vector<kernels::BlockSum> partial(static_cast<std::size_t>(nblocks));
    parallel_for_blocks(nblocks, threads, [&](std::int64_t b) {
        const std::int64_t lo = 1 + b * B;
        const std::int64_t hi = std::min(X, lo + B - 1);
        partial[static_cast<std::size_t>(b)] =
            ker.moment_block(form.lambda.data() + lo, tables.sigma.data() + lo,
                             tables.squarefree.data() + lo, static_cast<std::size_t>(hi - lo + 1), r);
    });
    Accum total;
    for (const auto& p : partial) total.add(Accum{p.sum, p.comp});
    return total.value();
}

LatticeMoment moment_sum_lattice(int r, std::int64_t X, const lattice::PolynomialSpec& spec,
                                 const arith::MultiplicativeTables& tables,
                                 const eigenform::EigenformTable& form,
                                 std::int64_t rep_budget_bytes) {
    if (r < 1) throw std::invalid_argument("moment_sum_lattice: r must be >= 1");
    if (X < 1 || X > form.limit || X > tables.limit)
        throw std::invalid_argument("moment_sum_lattice: X outside table range");

    const lattice::RepTable rep = lattice::rep_counts(spec, X - 1, rep_budget_bytes);
    Accum acc;
    for (std::int64_t v = 0; v < X; ++v) {
        const std::int64_t count = rep.counts[static_cast<std::size_t>(v)];
        if (count == 0) continue;
        const std::int64_t n = v + 1;
        if (!tables.squarefree[static_cast<std::size_t>(n)]) continue;
        acc.add(static_cast<double>(count) * pow_int(form.lambda[static_cast<std::size_t>(n)], r));
    }

    LatticeMoment out;
    out.raw = acc.value();
    const auto ident = lattice::verify_rep_identity(rep, tables);
    if (ident.ok) {
        out.c_num = ident.c_num;
        out.c_den = ident.c_den;
    } else {
        // identity failed to pin a constant; fall back to the n = 1 ratio
        out.c_num = rep.counts[0];
        out.c_den = 1;
    }
    out.normalized =
        out.raw * static_cast<double>(out.c_den) / static_cast<double>(out.c_num);
    return out;
}

MomentSeries compute_series_sieve(int r, const std::vector<std::int64_t>& xs,
                                  const arith::MultiplicativeTables& tables,
                                  const eigenform::EigenformTable& form, int threads) {
    MomentSeries s;
    s.r = r;
    s.method = Method::sieve;
    s.weight = form.weight;
    s.normalization = 1.0;
    for (std::int64_t x : xs)
        s.checkpoints.emplace_back(x, moment_sum_sieve(r, x, tables, form, threads));
    return s;
}

MomentSeries compute_series_lattice(int r, const std::vector<std::int64_t>& xs,
                                    const lattice::PolynomialSpec& spec,
                                    const arith::MultiplicativeTables& tables,
                                    const eigenform::EigenformTable& form) {
    MomentSeries s;
    s.r = r;
    s.method = Method::lattice;
    s.weight = form.weight;
    double c = 1.0;
    for (std::int64_t x : xs) {
        const LatticeMoment m = moment_sum_lattice(r, x, spec, tables, form);
        s.checkpoints.emplace_back(x, m.raw);
        c = static_cast<double>(m.c_num) / static_cast<double>(m.c_den);
    }
    s.normalization = c;
    return s;
}

AsymptoticPrediction predicted_exponents(int r) {
    if (r < 3) throw std::invalid_argument("predicted_exponents: defined for r >= 3");
    AsymptoticPrediction pred;
    pred.r = r;
    double gamma = 0.0;
    if (r % 2 == 0) {
        const int m = r / 2;
        gamma = 13.0 / (82.0 * m) * static_cast<double>(binomial(r, m - 1)) +
                15.0 / (8.0 * (m - 1)) * static_cast<double>(binomial(r, m - 2));
        double sum = 0.0;
        for (int n = 0; n <= m - 2; ++n) {
            const std::int64_t b = binomial(r, n - 1);
            if (b == 0) continue;  // n = 0: vanishing binomial, summand taken as 0
            const double num = static_cast<double>(r - 2 * n + 1);
            sum += num * num / static_cast<double>(n) * static_cast<double>(b);
        }
        gamma += 0.25 * sum;
        const std::int64_t central = binomial(r, m);
        pred.d_r_formula = static_cast<double>(central) / m - 1.0;
        if (central % m == 0) pred.d_r = static_cast<int>(central / m - 1);
    } else {
        const int m = (r - 1) / 2;
        gamma = 2.0 / (3.0 * m) * static_cast<double>(binomial(r, m - 1));
        double sum = 0.0;
        for (int n = 0; n <= m - 1; ++n) {
            const std::int64_t b = binomial(r, n - 1);
            if (b == 0) continue;
            const double num = static_cast<double>(r - 2 * n + 1);
            sum += num * num / static_cast<double>(n) * static_cast<double>(b);
        }
        gamma += 0.25 * sum - 5.0 / 6.0;
        pred.d_r_formula = std::numeric_limits<double>::quiet_NaN();
    }
    pred.gamma_r = gamma;
    pred.gamma_negative = gamma < 0.0;
    pred.error_exponent = 2.0 - 1.0 / (2.0 * (1.0 + gamma));
    return pred;
}

GrowthFit growth_exponent(const MomentSeries& series, std::int64_t x_lo, std::int64_t x_hi) {
    std::vector<double> lx, ly;
    for (const auto& [x, s] : series.checkpoints) {
        if (x < x_lo || x > x_hi || s == 0.0) continue;
        lx.push_back(std::log(static_cast<double>(x)));
        ly.push_back(std::log(std::fabs(s)));
    }
    if (lx.size() < 5)
        throw std::invalid_argument("growth_exponent: need at least 5 nonzero checkpoints");
    const OlsFit fit = ols(lx, ly);
    return GrowthFit{fit.slope, fit.slope_stderr, fit.points};
}

MainTermFit fit_main_term(const MomentSeries& series, std::int64_t x_lo, std::int64_t x_hi) {
    if (series.r % 2 != 0)
        throw std::invalid_argument("fit_main_term: no main term for odd r");
    if (series.checkpoints.size() < 8)
        throw std::invalid_argument("fit_main_term: need at least 8 checkpoints");

    double sxx = 0.0, sxy = 0.0;
    std::vector<std::pair<std::int64_t, double>> window;
    for (const auto& [x, s] : series.checkpoints) {
        if (x < x_lo || x > x_hi) continue;
        const double x2 = static_cast<double>(x) * static_cast<double>(x);
        sxx += x2 * x2;
        sxy += x2 * s;
        window.emplace_back(x, s);
    }
    if (window.size() < 3)
        throw std::invalid_argument("fit_main_term: need at least 3 checkpoints in window");

    MainTermFit fit;
    fit.points = static_cast<int>(window.size());
    fit.c_hat = sxy / sxx;
    double sse = 0.0;
    std::vector<double> lx, ly;
    for (const auto& [x, s] : window) {
        const double x2 = static_cast<double>(x) * static_cast<double>(x);
        const double resid = s - fit.c_hat * x2;
        sse += resid * resid;
        if (resid != 0.0) {
            lx.push_back(std::log(static_cast<double>(x)));
            ly.push_back(std::log(std::fabs(resid)));
        }
    }
    fit.c_stderr = window.size() > 1
                       ? std::sqrt(sse / static_cast<double>(window.size() - 1) / sxx)
                       : 0.0;
    fit.residual_slope = lx.size() >= 2 ? ols(lx, ly).slope
                                        : std::numeric_limits<double>::quiet_NaN();
    return fit;
}

void write_csv(const MomentSeries& series, std::ostream& os) {
    os << "r,method,X,S,normalization\n";
    for (const auto& [x, s] : series.checkpoints) {
        os << series.r << ',' << method_name(series.method) << ',' << x << ','
           << format_double(s) << ',' << format_double(series.normalization) << '\n';
    }
}

}  // namespace tripower::moments
