#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "tripower/arith.hpp"
#include "tripower/eigenform.hpp"
#include "tripower/lattice.hpp"

namespace tripower::moments {

enum class Method { sieve, lattice };

Method parse_method(std::string_view name);
const char* method_name(Method m);

// Checkpointed values of S_r(X) = sum over square-free n <= X of
// lambda(n)^r sigma(n). The lattice path carries its measured point-count
// normalization c; the sieve path has normalization 1.
struct MomentSeries {
    int r = 1;
    Method method = Method::sieve;
    int weight = 12;
    std::vector<std::pair<std::int64_t, double>> checkpoints;  // ascending X
    double normalization = 1.0;
};

// Geometric schedule: X = ceil(10^(k / per_decade)) clipped to [x_min, x_max],
// deduplicated, ascending, endpoints included.
std::vector<std::int64_t> checkpoint_schedule(std::int64_t x_min, std::int64_t x_max,
                                              int per_decade = 8);

// Square-free weighted power sum over n <= X, compensated summation on a
// fixed block grid; bit-stable across thread counts.
double moment_sum_sieve(int r, std::int64_t X, const arith::MultiplicativeTables& tables,
                        const eigenform::EigenformTable& form, int threads = 0);

struct LatticeMoment {
    double raw = 0.0;         // straight point-weighted sum
    double normalized = 0.0;  // raw divided by the measured constant c
    std::int64_t c_num = 0;
    std::int64_t c_den = 1;
};

// Same sum taken over lattice points x with spec(x) + 1 <= X square-free,
// grouped by value through the exact representation counts.
LatticeMoment moment_sum_lattice(int r, std::int64_t X, const lattice::PolynomialSpec& spec,
                                 const arith::MultiplicativeTables& tables,
                                 const eigenform::EigenformTable& form,
                                 std::int64_t rep_budget_bytes = lattice::kDefaultRepBudget);

MomentSeries compute_series_sieve(int r, const std::vector<std::int64_t>& xs,
                                  const arith::MultiplicativeTables& tables,
                                  const eigenform::EigenformTable& form, int threads = 0);
MomentSeries compute_series_lattice(int r, const std::vector<std::int64_t>& xs,
                                    const lattice::PolynomialSpec& spec,
                                    const arith::MultiplicativeTables& tables,
                                    const eigenform::EigenformTable& form);

// Asymptotic shape of S_r for r >= 3. Even r = 2m: main term X^2 P(log X)
// with deg P given by C(r,m)/m - 1 (an integer only when m | C(r,m); d_r is
// set when it is). Odd r: no main term. The growth-rate parameter gamma_r
// uses the convention that a summand with a vanishing binomial contributes 0,
// which makes gamma_3 negative; the flag reports that.
struct AsymptoticPrediction {
    int r = 0;
    std::optional<int> d_r;
    double d_r_formula = 0.0;  // NaN for odd r
    double gamma_r = 0.0;
    double error_exponent = 0.0;  // 2 - 1/(2(1+gamma_r))
    bool gamma_negative = false;
};

AsymptoticPrediction predicted_exponents(int r);

struct GrowthFit {
    double slope = 0.0;
    double slope_stderr = 0.0;
    int points = 0;
};

// Least-squares slope of log|S| vs log X over checkpoints in [x_lo, x_hi]
// with S != 0; needs at least 5 usable points.
GrowthFit growth_exponent(const MomentSeries& series, std::int64_t x_lo, std::int64_t x_hi);

struct MainTermFit {
    double c_hat = 0.0;
    double c_stderr = 0.0;
    double residual_slope = 0.0;  // slope of log|S - c_hat X^2|
    int points = 0;
};

// Fit S(X) = C X^2 over checkpoints in [x_lo, x_hi]. Even r only; the series
// must carry at least 8 checkpoints.
MainTermFit fit_main_term(const MomentSeries& series, std::int64_t x_lo, std::int64_t x_hi);

// CSV rows: r,method,X,S,normalization
void write_csv(const MomentSeries& series, std::ostream& os);

}  // namespace tripower::moments
