#include "doctest.h"
#include "support.hpp"
#include "umbra/error.hpp"
#include "umbra/expr.hpp"

using namespace umbra;
using umbra::testing::Rng;

namespace {

RatFn R(const Field& f, const char* text) { return parse_ratfn(text, f); }

void check_canonical(const RatFn& r) {
    CHECK(r.den().is_monic());
    CHECK(gcd(r.num(), r.den()).is_one());
    if (r.is_zero()) CHECK(r.den().is_one());
}

}  // namespace

TEST_CASE("ratfn_arith examples") {
    const Field f2 = Field::create(2);
    CHECK((R(f2, "1/x") + R(f2, "1/x")).is_zero());
    const RatFn r(parse_poly("x^2+x", f2), parse_poly("x", f2));
    CHECK(r == R(f2, "x+1"));
    CHECK(r.is_polynomial());
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const RatFn a = rng.nonzero_ratfn(f2, 8);
        CHECK((a * a.inv()).is_one());
    }
    CHECK_THROWS_AS(R(f2, "x") / RatFn(f2), Error);
    CHECK_THROWS_AS(RatFn(Poly::x(f2), Poly(f2)), Error);
}

TEST_CASE("frobenius_power examples") {
    const Field f2 = Field::create(2);
    CHECK(frobenius_power(R(f2, "x^2+x"), 1) == R(f2, "x^4+x^2"));
    CHECK(frobenius_power(RatFn::one(f2), 5).is_one());
    CHECK(frobenius_power(R(f2, "1/x"), 2) == R(f2, "1/x^4"));
    const Field f3 = Field::create(3);
    const RatFn a = R(f3, "(x+2)/(x^2+1)");
    CHECK(frobenius_power(a, 1) == a.pow(3));
    CHECK(valuation(frobenius_power(R(f3, "1/x^2+x"), 2)) == ValExp(-18));
}

TEST_CASE("qth_root examples") {
    const Field f2 = Field::create(2);
    CHECK(qth_root(R(f2, "x^4+x^2")) == R(f2, "x^2+x"));
    CHECK(qth_root(RatFn::one(f2)).is_one());
    try {
        qth_root(R(f2, "x"));
        FAIL("expected QthRootNotExist");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::QthRootNotExist);
    }
}

TEST_CASE("valuation examples") {
    for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
        const Field f = Field::of_order(q);
        std::size_t qi = 1;
        for (int i = 1; i <= 6; ++i) {
            qi *= q;
            CHECK(valuation(RatFn(Poly::binomial(f, qi, 1))) == ValExp(1));
        }
    }
    // D_2 = [2][1]^q for q = 2 from the product formula.
    const Field f2 = Field::create(2);
    const Poly d2 = Poly::binomial(f2, 4, 1) * pow(Poly::binomial(f2, 2, 1), 2);
    CHECK(valuation(RatFn(d2)) == ValExp(3));
    CHECK(valuation(RatFn(f2)).is_infinite());
    CHECK(ValExp(5) < ValExp::infinity());
    CHECK(ValExp(-3) < ValExp(2));
}

TEST_CASE("field axioms over F_q(x) on seeded samples") {
    for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
        const Field f = Field::of_order(q);
        CAPTURE(q);
        Rng rng(500 + q);
        for (int i = 0; i < 40; ++i) {
            const RatFn a = rng.ratfn(f, 5);
            const RatFn b = rng.ratfn(f, 5);
            const RatFn c = rng.nonzero_ratfn(f, 5);
            CHECK(a + b == b + a);
            CHECK(a * b == b * a);
            CHECK((a + b) + c == a + (b + c));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK((a - c) + c == a);
            CHECK((a / c) * c == a);
            check_canonical(a * b + c);
            check_canonical(a / c - b);
        }
    }
}

TEST_CASE("valuation is multiplicative and ultrametric") {
    for (std::uint32_t q : {2u, 3u, 5u}) {
        const Field f = Field::of_order(q);
        Rng rng(900 + q);
        for (int i = 0; i < 200; ++i) {
            // Scale by x^k to spread valuations around zero.
            const RatFn xs = RatFn::x(f).pow(static_cast<std::int64_t>(rng.below(7)) - 3);
            const RatFn r = rng.nonzero_ratfn(f, 4) * xs;
            const RatFn s = rng.nonzero_ratfn(f, 4);
            CHECK(valuation(r * s).value() == valuation(r).value() + valuation(s).value());
            const ValExp vsum = valuation(r + s);
            const ValExp vmin = std::min(valuation(r), valuation(s));
            CHECK(vsum >= vmin);
            if (valuation(r) != valuation(s)) CHECK(vsum == vmin);
        }
    }
}

TEST_CASE("frobenius after qth_root is the identity on q-th powers") {
    Rng rng(17);
    for (std::uint32_t q : {2u, 3u, 4u}) {
        const Field f = Field::of_order(q);
        for (int i = 0; i < 30; ++i) {
            const RatFn a = rng.ratfn(f, 6).frobenius(1);
            CHECK(frobenius_power(qth_root(a), 1) == a);
        }
    }
}
