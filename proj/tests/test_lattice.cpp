#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>
#include <sstream>
#include <vector>

#include "tripower/arith.hpp"
#include "tripower/common.hpp"
#include "tripower/lattice.hpp"

using namespace tripower;
using lattice::PolyKind;
using lattice::PolynomialSpec;

namespace {

// Test oracle: direct box scan. The box radius is generous enough for the
// limits used here.
std::vector<std::int64_t> counts_bruteforce(const PolynomialSpec& spec, std::int64_t limit,
                                            std::int64_t radius) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(limit) + 1, 0);
    std::array<std::int64_t, 4> x{};
    for (x[0] = -radius; x[0] <= radius; ++x[0])
        for (x[1] = -radius; x[1] <= radius; ++x[1])
            for (x[2] = -radius; x[2] <= radius; ++x[2])
                for (x[3] = -radius; x[3] <= radius; ++x[3]) {
                    const std::int64_t v = lattice::poly_value(spec, x);
                    if (v <= limit) ++counts[static_cast<std::size_t>(v)];
                }
    return counts;
}

}  // namespace

TEST_CASE("poly_value basics") {
    const auto alpha = PolynomialSpec::make(PolyKind::alpha);
    CHECK(lattice::poly_value(alpha, {0, 0, 0, 0}) == 0);
    CHECK(lattice::poly_value(alpha, {1, 0, 0, 0}) == 1);
    CHECK(lattice::poly_value(alpha, {-1, -1, -1, -1}) == 0);
    CHECK(lattice::poly_value(alpha, {2, 1, 1, 1}) == 3 + 1 + 2 + 4);
    // alpha = (x1^2+x1 + x2^2+x2 + 2(x3^2+x3) + 4(x4^2+x4)) / 2
    const std::array<std::int64_t, 4> pt{3, -2, 5, -4};
    const std::int64_t direct = (3 * 3 + 3 + 4 - 2 + 2 * (25 + 5) + 4 * (16 - 4)) / 2;
    CHECK(lattice::poly_value(alpha, pt) == direct);

    const auto a1 = PolynomialSpec::make(PolyKind::alpha1);
    CHECK(lattice::poly_value(a1, {1, 1, 0, 0}) == 3);       // 1 + 2
    CHECK(lattice::poly_value(a1, {0, 0, 1, -2}) == 4 + 4);  // 2(x^2+x) each
    const auto a2 = PolynomialSpec::make(PolyKind::alpha2);
    CHECK(lattice::poly_value(a2, {2, 1, 1, 1}) == 4 + 2 + 2 + 4);

    CHECK_THROWS_AS(lattice::poly_value(alpha, {std::int64_t(1) << 29, 0, 0, 0}),
                    std::invalid_argument);
}

TEST_CASE("rep_counts small values for alpha") {
    const auto alpha = PolynomialSpec::make(PolyKind::alpha);
    const auto t = lattice::rep_counts(alpha, 50);
    CHECK(t.counts[0] == 16);
    CHECK(t.counts[1] == 32);
    CHECK(t.counts[3] == 64);
    const auto oracle = counts_bruteforce(alpha, 50, 12);
    for (std::int64_t n = 0; n <= 50; ++n) {
        CAPTURE(n);
        REQUIRE(t.counts[static_cast<std::size_t>(n)] == oracle[static_cast<std::size_t>(n)]);
    }
    // shift symmetry x -> -1-x in each coordinate forces multiples of 16
    for (std::int64_t n = 0; n <= 50; ++n)
        CHECK(t.counts[static_cast<std::size_t>(n)] % 16 == 0);
}

TEST_CASE("rep_counts matches box scan for alpha1 and alpha2") {
    for (PolyKind kind : {PolyKind::alpha1, PolyKind::alpha2}) {
        CAPTURE(lattice::poly_name(kind));
        const auto spec = PolynomialSpec::make(kind);
        const auto t = lattice::rep_counts(spec, 40);
        const auto oracle = counts_bruteforce(spec, 40, 10);
        for (std::int64_t n = 0; n <= 40; ++n) {
            CAPTURE(n);
            REQUIRE(t.counts[static_cast<std::size_t>(n)] == oracle[static_cast<std::size_t>(n)]);
        }
    }
}

TEST_CASE("rep identity: measured constants") {
    const auto tables = arith::build_tables(1100);
    SUBCASE("alpha has c = 16") {
        const auto res =
            lattice::verify_rep_identity(PolynomialSpec::make(PolyKind::alpha), 1000, tables);
        REQUIRE(res.ok);
        CHECK(res.c_num == 16);
        CHECK(res.c_den == 1);
    }
    SUBCASE("alpha1 has a constant") {
        const auto res =
            lattice::verify_rep_identity(PolynomialSpec::make(PolyKind::alpha1), 1000, tables);
        REQUIRE(res.ok);
        CHECK(res.c_num == 4);
        CHECK(res.c_den == 1);
    }
    SUBCASE("alpha2 has a constant") {
        const auto res =
            lattice::verify_rep_identity(PolynomialSpec::make(PolyKind::alpha2), 1000, tables);
        REQUIRE(res.ok);
        CHECK(res.c_num == 8);
        CHECK(res.c_den == 1);
    }
    SUBCASE("zeroed counts fail at n = 1") {
        lattice::RepTable zeroed;
        zeroed.spec = PolynomialSpec::make(PolyKind::alpha);
        zeroed.limit = 10;
        zeroed.counts.assign(11, 0);
        const auto res = lattice::verify_rep_identity(zeroed, tables);
        CHECK_FALSE(res.ok);
        REQUIRE(res.failure.has_value());
        CHECK(res.failure->n == 1);
    }
    SUBCASE("tampered counts report the offending n") {
        auto t = lattice::rep_counts(PolynomialSpec::make(PolyKind::alpha), 100);
        t.counts[57] += 1;
        const auto res = lattice::verify_rep_identity(t, tables);
        CHECK_FALSE(res.ok);
        REQUIRE(res.failure.has_value());
        CHECK(res.failure->n == 58);
    }
}

TEST_CASE("enumerate_values") {
    const auto alpha = PolynomialSpec::make(PolyKind::alpha);

    SUBCASE("bound 0 and 1") {
        int calls = 0;
        lattice::enumerate_values(alpha, 0, [&](std::int64_t, const auto&) { ++calls; });
        CHECK(calls == 0);
        lattice::enumerate_values(alpha, 1, [&](std::int64_t v, const auto&) {
            CHECK(v == 0);
            ++calls;
        });
        CHECK(calls == 16);
    }
    SUBCASE("bound 2 gives 48 points") {
        int calls = 0;
        lattice::enumerate_values(alpha, 2, [&](std::int64_t, const auto&) { ++calls; });
        CHECK(calls == 48);
    }
    SUBCASE("lexicographic, unique, consistent with counts") {
        std::vector<std::array<std::int64_t, 4>> pts;
        std::map<std::int64_t, std::int64_t> by_value;
        lattice::enumerate_values(alpha, 1000, [&](std::int64_t v, const auto& x) {
            pts.push_back(x);
            ++by_value[v];
        });
        CHECK(std::is_sorted(pts.begin(), pts.end()));
        CHECK(std::adjacent_find(pts.begin(), pts.end()) == pts.end());
        const auto t = lattice::rep_counts(alpha, 999);
        std::int64_t total = 0;
        for (std::int64_t n = 0; n <= 999; ++n) {
            CHECK(by_value[n] == t.counts[static_cast<std::size_t>(n)]);
            total += t.counts[static_cast<std::size_t>(n)];
        }
        CHECK(total == static_cast<std::int64_t>(pts.size()));
    }
    SUBCASE("square-term polynomials enumerate correctly too") {
        const auto a1 = PolynomialSpec::make(PolyKind::alpha1);
        std::map<std::int64_t, std::int64_t> by_value;
        lattice::enumerate_values(a1, 200, [&](std::int64_t v, const auto&) { ++by_value[v]; });
        const auto t = lattice::rep_counts(a1, 199);
        for (std::int64_t n = 0; n <= 199; ++n)
            CHECK(by_value[n] == t.counts[static_cast<std::size_t>(n)]);
    }
}

TEST_CASE("errors and budget") {
    const auto alpha = PolynomialSpec::make(PolyKind::alpha);
    CHECK_THROWS_AS(lattice::rep_counts(alpha, -1), std::invalid_argument);
    CHECK_THROWS_AS(lattice::rep_counts(alpha, 1000000, 1024), resource_limit_error);
    CHECK_THROWS_AS(lattice::parse_poly_kind("beta"), std::invalid_argument);
    CHECK(lattice::parse_poly_kind("alpha2") == PolyKind::alpha2);
}

TEST_CASE("csv export") {
    const auto tables = arith::build_tables(10);
    const auto t = lattice::rep_counts(PolynomialSpec::make(PolyKind::alpha), 3);
    std::ostringstream os;
    lattice::write_csv(t, tables, os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "n,delta4,sigma_next,ratio");
    std::getline(is, line);
    CHECK(line == "0,16,1,16");
    std::getline(is, line);
    CHECK(line == "1,32,2,16");
}
