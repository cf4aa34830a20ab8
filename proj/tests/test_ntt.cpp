#include <doctest.h>

#include <random>

#include "tripower/ntt.hpp"

using namespace tripower;
using ntt::u64;

namespace {

// naive exact polynomial product
std::vector<mpz_class> mul_naive(const std::vector<mpz_class>& a,
                                 const std::vector<mpz_class>& b) {
    std::vector<mpz_class> c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

}  // namespace

TEST_CASE("moduli are NTT-friendly primes with valid roots") {
    for (const auto& m : ntt::kModuli) {
        CHECK((m.p - 1) % (u64(1) << 23) == 0);
        const ntt::FieldOps f{m.p};
        // the 2^23-rd root of unity has exact order 2^23
        const u64 w = f.pow(m.g, (m.p - 1) >> 23);
        u64 x = w;
        for (int i = 0; i < 22; ++i) x = f.mul(x, x);
        CHECK(x == m.p - 1);  // w^(2^22) = -1
        CHECK(f.mul(x, x) == 1);
        // Fermat holds for a few random bases (necessary condition, and the
        // convolution cross-checks below pin actual primality in practice)
        std::mt19937_64 rng(42);
        for (int i = 0; i < 20; ++i) {
            const u64 a = rng() % (m.p - 2) + 1;
            CHECK(f.pow(a, m.p - 1) == 1);
        }
    }
}

TEST_CASE("field helpers") {
    const ntt::FieldOps f{ntt::kModuli[0].p};
    CHECK(f.add(f.p - 1, 1) == 0);
    CHECK(f.sub(0, 1) == f.p - 1);
    CHECK(f.mul(f.inv(12345), 12345) == 1);
    CHECK(f.reduce_i64(-3) == f.p - 3);
    const u64 w = 987654321987ULL;
    const u64 wpre = f.shoup(w);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
        const u64 a = rng() % f.p;
        CHECK(f.mul_shoup(a, w, wpre) == f.mul(a, w));
    }
}

TEST_CASE("forward/inverse round-trip") {
    const ntt::Transformer tr(ntt::kModuli[1]);
    std::mt19937_64 rng(11);
    for (std::size_t n : {std::size_t(1), std::size_t(2), std::size_t(64), std::size_t(4096)}) {
        std::vector<u64> a(n);
        for (auto& v : a) v = rng() % tr.field().p;
        auto b = a;
        tr.forward(b);
        tr.inverse(b);
        CHECK(b == a);
    }
}

TEST_CASE("multi-prime convolution matches exact arithmetic") {
    std::mt19937_64 rng(1234);
    for (int rep = 0; rep < 5; ++rep) {
        const std::size_t na = 200 + rep * 37, nb = 150 + rep * 53;
        std::vector<mpz_class> a(na), b(nb);
        std::vector<std::int64_t> ai(na), bi(nb);
        for (std::size_t i = 0; i < na; ++i) {
            ai[i] = static_cast<std::int64_t>(rng() % (std::uint64_t(1) << 40)) -
                    (std::int64_t(1) << 39);
            a[i] = static_cast<long>(ai[i]);
        }
        for (std::size_t i = 0; i < nb; ++i) {
            bi[i] = static_cast<std::int64_t>(rng() % (std::uint64_t(1) << 40)) -
                    (std::int64_t(1) << 39);
            b[i] = static_cast<long>(bi[i]);
        }
        const auto expected = mul_naive(a, b);

        const int k = 3;  // 3 x 62 bits >> 81-bit products
        std::vector<std::vector<u64>> residues(k);
        for (int j = 0; j < k; ++j) {
            const ntt::Transformer tr(ntt::kModuli[static_cast<std::size_t>(j)]);
            std::vector<u64> am(na), bm(nb);
            for (std::size_t i = 0; i < na; ++i) am[i] = tr.field().reduce_i64(ai[i]);
            for (std::size_t i = 0; i < nb; ++i) bm[i] = tr.field().reduce_i64(bi[i]);
            residues[static_cast<std::size_t>(j)] =
                tr.multiply(std::move(am), std::move(bm), na + nb - 1);
        }
        const auto got = ntt::crt_signed(residues);
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CAPTURE(i);
            REQUIRE(got[i] == expected[i]);
        }
    }
}

TEST_CASE("truncated square agrees with full product") {
    const ntt::Transformer tr(ntt::kModuli[2]);
    std::mt19937_64 rng(99);
    std::vector<u64> a(500);
    for (auto& v : a) v = rng() % tr.field().p;
    const auto full = tr.multiply(a, a, 2 * a.size() - 1);
    const auto trunc = tr.square(a, 300);
    REQUIRE(trunc.size() == 300);
    for (std::size_t i = 0; i < trunc.size(); ++i) CHECK(trunc[i] == full[i]);
}
