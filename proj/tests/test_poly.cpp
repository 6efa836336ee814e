#include "doctest.h"
#include "support.hpp"
#include "umbra/error.hpp"
#include "umbra/expr.hpp"
#include "umbra/poly.hpp"

using namespace umbra;
using umbra::testing::Rng;

namespace {

Poly P(const Field& f, const char* text) { return parse_poly(text, f); }

}  // namespace

TEST_CASE("poly_arith examples over F_2") {
    const Field f = Field::create(2);
    CHECK(P(f, "x^2+x") * P(f, "x^2+x") == P(f, "x^4+x^2"));
    CHECK(gcd(P(f, "x^4+x"), P(f, "x^2+x")) == P(f, "x^2+x"));
    const Poly a = P(f, "x^3+1");
    CHECK(a + Poly(f) == a);
    CHECK(exact_div(P(f, "x^4+x"), P(f, "x^2+x")) == P(f, "x^2+x+1"));
}

TEST_CASE("degree sentinel and basic accessors") {
    const Field f = Field::create(3);
    const Poly zero(f);
    CHECK_FALSE(zero.degree().has_value());
    CHECK_FALSE(zero.ord().has_value());
    CHECK(Poly::from_int(f, 5).degree() == 0u);
    CHECK(P(f, "x^4+x^2").ord() == 2u);
    CHECK(Poly::binomial(f, 3, 1) == P(f, "x^3-x"));
    CHECK(P(f, "2*x^2+1").monic() == P(f, "x^2+2"));
}

TEST_CASE("division errors and remainder bounds") {
    const Field f = Field::create(5);
    CHECK_THROWS_AS(divrem(P(f, "x+1"), Poly(f)), Error);
    try {
        exact_div(P(f, "x^2+1"), P(f, "x+1"));
        FAIL("expected NotPolynomial");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotPolynomial);
    }
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        const Poly a = rng.poly(f, 30);
        const Poly b = rng.nonzero_poly(f, 12);
        auto [q, r] = divrem(a, b);
        CHECK(q * b + r == a);
        CHECK(r.size() < b.size());
    }
}

TEST_CASE("ring axioms on seeded samples") {
    for (std::uint32_t q : {2u, 3u, 4u, 5u, 9u}) {
        const Field f = Field::of_order(q);
        CAPTURE(q);
        Rng rng(100 + q);
        for (int i = 0; i < 60; ++i) {
            const Poly a = rng.poly(f, 20);
            const Poly b = rng.poly(f, 20);
            const Poly c = rng.poly(f, 20);
            CHECK(a * b == b * a);
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK((a - b) + b == a);
            CHECK(a + (-a) == Poly(f));
        }
    }
}

TEST_CASE("frobenius and qth_root") {
    const Field f = Field::create(2);
    CHECK(P(f, "x^2+x").frobenius(1) == P(f, "x^4+x^2"));
    CHECK(P(f, "x^4+x^2").qth_root() == P(f, "x^2+x"));
    CHECK_FALSE(P(f, "x").qth_root().has_value());
    Rng rng(5);
    for (std::uint32_t q : {3u, 4u, 5u}) {
        const Field g = Field::of_order(q);
        for (int i = 0; i < 20; ++i) {
            const Poly a = rng.poly(g, 10);
            // Frobenius is raising to the q-th power.
            CHECK(a.frobenius(1) == pow(a, q));
            CHECK(a.frobenius(2).qth_root()->qth_root() == a);
        }
    }
}

TEST_CASE("evaluation") {
    const Field f = Field::create(5);
    const Poly a = P(f, "x^2+3*x+1");
    CHECK(a.eval(FqElem::from_int(f, 2)) == FqElem::from_int(f, 11));
    // x^q - x vanishes on F_q.
    const Field f9 = Field::of_order(9);
    const Poly b = Poly::binomial(f9, 9, 1);
    for (Field::Rep r = 0; r < 9; ++r) CHECK(b.eval(FqElem(f9, r)).is_zero());
}

TEST_CASE("fast multiplication agrees with schoolbook") {
    Rng rng(2024);
    for (std::uint32_t q : {2u, 3u, 4u, 5u, 8u, 9u, 257u, 65521u}) {
        const Field f = Field::of_order(q);
        CAPTURE(q);
        for (std::size_t n : {100u, 517u, 2000u}) {
            const Poly a = rng.poly(f, n);
            const Poly b = rng.poly(f, n / 2 + 3);
            CHECK(kernels::mul_fast(a, b) == kernels::mul_schoolbook(a, b));
        }
    }
}

TEST_CASE("fast division agrees with schoolbook") {
    Rng rng(77);
    for (std::uint32_t q : {2u, 3u, 4u, 5u, 9u, 65521u}) {
        const Field f = Field::of_order(q);
        CAPTURE(q);
        for (int i = 0; i < 4; ++i) {
            const Poly a = rng.poly(f, 3000);
            const Poly b = rng.nonzero_poly(f, 1200);
            auto fast = kernels::divrem_fast(a, b);
            auto slow = kernels::divrem_schoolbook(a, b);
            CHECK(fast.first == slow.first);
            CHECK(fast.second == slow.second);
        }
    }
}

TEST_CASE("half-gcd agrees with Euclid") {
    Rng rng(99);
    for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u}) {
        const Field f = Field::of_order(q);
        CAPTURE(q);
        for (int i = 0; i < 4; ++i) {
            const Poly g = rng.nonzero_poly(f, 400);
            const Poly a = g * rng.nonzero_poly(f, 900);
            const Poly b = g * rng.nonzero_poly(f, 900);
            const Poly slow = kernels::gcd_euclid(a, b);
            CHECK(kernels::gcd_fast(a, b) == slow);
            CHECK(gcd(a, b) == slow);
            CHECK(rem(a, slow).is_zero());
        }
        // Coprime inputs and inputs with a power of x in common.
        const Poly a = rng.nonzero_poly(f, 1500);
        const Poly b = rng.nonzero_poly(f, 1400);
        CHECK(kernels::gcd_fast(a, b) == kernels::gcd_euclid(a, b));
        const Poly xa = a.shift_up(40);
        const Poly xb = b.shift_up(70);
        CHECK(kernels::gcd_fast(xa, xb) == kernels::gcd_euclid(xa, xb));
    }
}

TEST_CASE("sparse brackets multiply and divide exactly") {
    const Field f = Field::create(3);
    // x^(q^3) - x^(q^2) = (x^q - x)^(q^2)
    const Poly big = Poly::binomial(f, 27, 9);
    CHECK(big == Poly::binomial(f, 3, 1).frobenius(2));
    const Poly prod = big * Poly::binomial(f, 81, 1) * Poly::binomial(f, 243, 3);
    CHECK(exact_div(prod, big) == Poly::binomial(f, 81, 1) * Poly::binomial(f, 243, 3));
}
