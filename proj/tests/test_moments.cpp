#include <doctest.h>

#include <cmath>
#include <sstream>

#include "tripower/arith.hpp"
#include "tripower/eigenform.hpp"
#include "tripower/moments.hpp"

using namespace tripower;
using lattice::PolyKind;
using lattice::PolynomialSpec;

namespace {

struct Fixture {
    arith::MultiplicativeTables tables = arith::build_tables(20000);
    eigenform::EigenformTable form = eigenform::delta_coefficients(20000);
};

Fixture& fixture() {
    static Fixture f;
    return f;
}

moments::MomentSeries synthetic(int r, const std::vector<std::int64_t>& xs,
                                double (*fn)(double)) {
    moments::MomentSeries s;
    s.r = r;
    s.method = moments::Method::sieve;
    for (std::int64_t x : xs) s.checkpoints.emplace_back(x, fn(static_cast<double>(x)));
    return s;
}

}  // namespace

TEST_CASE("checkpoint schedule is geometric and covers the range") {
    const auto xs = moments::checkpoint_schedule(1000, 1000000, 8);
    REQUIRE(xs.size() == 25);
    CHECK(xs.front() == 1000);
    CHECK(xs.back() == 1000000);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double expect = std::ceil(std::pow(10.0, 3.0 + static_cast<double>(k) / 8.0));
        CHECK(xs[k] == static_cast<std::int64_t>(expect));
    }
    CHECK(std::is_sorted(xs.begin(), xs.end()));
    CHECK_THROWS_AS(moments::checkpoint_schedule(0, 10), std::invalid_argument);
    CHECK_THROWS_AS(moments::checkpoint_schedule(100, 10), std::invalid_argument);
}

TEST_CASE("sieve moment basics") {
    auto& f = fixture();
    for (int r = 1; r <= 6; ++r)
        CHECK(moments::moment_sum_sieve(r, 1, f.tables, f.form) == 1.0);

    // 1 + lambda(2) * sigma(2) = 1 - 48 / 2^5.5
    const double expect = 1.0 + f.form.lambda[2] * 2.0;
    CHECK(moments::moment_sum_sieve(1, 2, f.tables, f.form) ==
          doctest::Approx(expect).epsilon(1e-15));
    CHECK(expect == doctest::Approx(-0.06066).epsilon(1e-3));

    // handwritten loop over square-free n <= 10: {1,2,3,5,6,7,10}
    double oracle = 0.0;
    for (std::int64_t n : {1, 2, 3, 5, 6, 7, 10})
        oracle += f.form.lambda[static_cast<std::size_t>(n)] *
                  f.form.lambda[static_cast<std::size_t>(n)] *
                  static_cast<double>(f.tables.sigma[static_cast<std::size_t>(n)]);
    CHECK(moments::moment_sum_sieve(2, 10, f.tables, f.form) ==
          doctest::Approx(oracle).epsilon(1e-13));

    CHECK_THROWS_AS(moments::moment_sum_sieve(1, 50000, f.tables, f.form),
                    std::invalid_argument);
    CHECK_THROWS_AS(moments::moment_sum_sieve(0, 10, f.tables, f.form), std::invalid_argument);
}

TEST_CASE("sieve moment is bit-stable across thread counts") {
    auto& f = fixture();
    for (int r : {1, 2, 3}) {
        const double one = moments::moment_sum_sieve(r, 19999, f.tables, f.form, 1);
        const double four = moments::moment_sum_sieve(r, 19999, f.tables, f.form, 4);
        CHECK(one == four);
    }
}

TEST_CASE("lattice moment basics") {
    auto& f = fixture();
    const auto alpha = PolynomialSpec::make(PolyKind::alpha);
    const auto m1 = moments::moment_sum_lattice(3, 1, alpha, f.tables, f.form);
    CHECK(m1.raw == 16.0);
    CHECK(m1.normalized == 1.0);
    CHECK(m1.c_num == 16);

    const auto m2 = moments::moment_sum_lattice(2, 2, alpha, f.tables, f.form);
    CHECK(m2.raw == doctest::Approx(16.0 + 32.0 * f.form.lambda[2] * f.form.lambda[2])
                        .epsilon(1e-14));
}

TEST_CASE("dual-path equality at small scale") {
    auto& f = fixture();
    const auto alpha = PolynomialSpec::make(PolyKind::alpha);
    for (int r = 1; r <= 6; ++r) {
        for (std::int64_t x : {100, 1000}) {
            const double sieve = moments::moment_sum_sieve(r, x, f.tables, f.form);
            const auto lat = moments::moment_sum_lattice(r, x, alpha, f.tables, f.form);
            CAPTURE(r);
            CAPTURE(x);
            REQUIRE(std::fabs(lat.normalized - sieve) <= 1e-6 * std::max(1.0, std::fabs(sieve)));
            REQUIRE(lat.c_num == 16);
        }
    }
}

TEST_CASE("predicted exponents") {
    const auto p4 = moments::predicted_exponents(4);
    REQUIRE(p4.d_r.has_value());
    CHECK(*p4.d_r == 2);
    CHECK(p4.d_r_formula == doctest::Approx(2.0));
    // 13/41 + 15/8
    CHECK(p4.gamma_r == doctest::Approx(13.0 / 41.0 + 15.0 / 8.0).epsilon(1e-12));
    CHECK(p4.gamma_r == doctest::Approx(2.1921).epsilon(1e-4));
    CHECK_FALSE(p4.gamma_negative);

    const auto p3 = moments::predicted_exponents(3);
    CHECK_FALSE(p3.d_r.has_value());
    CHECK(p3.gamma_r == doctest::Approx(-1.0 / 6.0).epsilon(1e-12));
    CHECK(p3.gamma_negative);
    CHECK(p3.error_exponent == doctest::Approx(1.4).epsilon(1e-12));

    const auto p5 = moments::predicted_exponents(5);
    CHECK(p5.gamma_r == doctest::Approx(5.0 / 3.0 + 4.0 - 5.0 / 6.0).epsilon(1e-12));

    const auto p6 = moments::predicted_exponents(6);
    CHECK_FALSE(p6.d_r.has_value());  // 20/3 - 1 is not an integer
    CHECK(p6.d_r_formula == doctest::Approx(20.0 / 3.0 - 1.0).epsilon(1e-12));

    CHECK_THROWS_AS(moments::predicted_exponents(2), std::invalid_argument);
    CHECK_THROWS_AS(moments::predicted_exponents(0), std::invalid_argument);
}

TEST_CASE("growth_exponent on synthetic series") {
    const auto xs = moments::checkpoint_schedule(1000, 1000000, 8);
    const auto exact = synthetic(2, xs, [](double x) { return x * x; });
    const auto fit = moments::growth_exponent(exact, 1000, 1000000);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fit.slope_stderr < 1e-9);

    const auto mixed = synthetic(2, xs, [](double x) { return 3 * x * x + std::pow(x, 1.6); });
    const auto fit2 = moments::growth_exponent(mixed, 10000, 1000000);
    CHECK(fit2.slope > 1.95);
    CHECK(fit2.slope < 2.05);

    moments::MomentSeries tiny;
    tiny.r = 2;
    tiny.checkpoints = {{10, 1.0}, {20, 2.0}, {30, 3.0}, {40, 0.0}, {50, 5.0}};
    CHECK_THROWS_AS(moments::growth_exponent(tiny, 10, 50), std::invalid_argument);
}

TEST_CASE("fit_main_term on synthetic series") {
    const auto xs = moments::checkpoint_schedule(1000, 1000000, 8);
    const auto pure = synthetic(2, xs, [](double x) { return 5 * x * x; });
    const auto fit = moments::fit_main_term(pure, 100000, 1000000);
    CHECK(fit.c_hat == doctest::Approx(5.0).epsilon(1e-9));

    const auto mixed =
        synthetic(2, xs, [](double x) { return 5 * x * x + 40 * std::pow(x, 1.6); });
    const auto near = moments::fit_main_term(mixed, 1000, 10000);
    const auto far = moments::fit_main_term(mixed, 100000, 1000000);
    CHECK(std::fabs(far.c_hat - 5.0) < std::fabs(near.c_hat - 5.0));
    CHECK(far.c_hat == doctest::Approx(5.0).epsilon(0.05));

    const auto odd = synthetic(3, xs, [](double x) { return x; });
    CHECK_THROWS_AS(moments::fit_main_term(odd, 1000, 1000000), std::invalid_argument);
}

TEST_CASE("series computation and CSV") {
    auto& f = fixture();
    const auto xs = moments::checkpoint_schedule(10, 1000, 4);
    const auto series = moments::compute_series_sieve(2, xs, f.tables, f.form);
    REQUIRE(series.checkpoints.size() == xs.size());
    CHECK(series.normalization == 1.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(series.checkpoints[i].first == xs[i]);
        CHECK(series.checkpoints[i].second ==
              moments::moment_sum_sieve(2, xs[i], f.tables, f.form));
    }

    const auto lat = moments::compute_series_lattice(
        2, xs, PolynomialSpec::make(PolyKind::alpha), f.tables, f.form);
    CHECK(lat.normalization == 16.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(lat.checkpoints[i].second / lat.normalization ==
              doctest::Approx(series.checkpoints[i].second).epsilon(1e-9));
    }

    std::ostringstream os;
    moments::write_csv(series, os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "r,method,X,S,normalization");
    std::getline(is, line);
    CHECK(line.substr(0, 11) == "2,sieve,10,");
}
