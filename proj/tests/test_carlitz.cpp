#include "doctest.h"
#include "support.hpp"
#include "umbra/carlitz.hpp"
#include "umbra/error.hpp"
#include "umbra/expr.hpp"

using namespace umbra;
using umbra::testing::Rng;

namespace {

Poly P(const Field& f, const char* text) { return parse_poly(text, f); }

// Every polynomial of degree < d, in a fixed order.
std::vector<Poly> polys_below(const Field& f, std::size_t d) {
    std::vector<Poly> out;
    std::size_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= f.q();
    for (std::size_t k = 0; k < count; ++k) {
        std::vector<Poly::Rep> c(d);
        std::size_t r = k;
        for (auto& v : c) {
            v = static_cast<Poly::Rep>(r % f.q());
            r /= f.q();
        }
        out.emplace_back(f, std::move(c));
    }
    return out;
}

}  // namespace

TEST_CASE("factorials follow the product formulas") {
    for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
        const std::size_t n = q <= 3 ? 7 : 5;
        const Field f = Field::of_order(q);
        const CarlitzCache c(f, n);
        CAPTURE(q);
        for (std::size_t i = 1; i <= n; ++i) {
            // D_i = prod_{k=1}^{i} [k]^(q^(i-k)), L_i = prod_{k=1}^{i} [k]
            Poly d = Poly::constant(f, 1), l = Poly::constant(f, 1);
            for (std::size_t k = 1; k <= i; ++k) {
                d = d * c.bracket(k).frobenius(static_cast<unsigned>(i - k));
                l = l * c.bracket(k);
            }
            CHECK(c.D(i) == d);
            CHECK(c.L(i) == l);
            CHECK(c.D(i).degree() == i * c.qpow(i));
            for (std::size_t j = 0; j <= i; ++j) {
                CHECK(c.factorial_ratio(i, j) == exact_div(c.D(i), c.D(i - j).frobenius(static_cast<unsigned>(j))));
                CHECK(c.l_ratio(i, j) == exact_div(c.L(i), c.L(j)));
            }
        }
    }
}

TEST_CASE("factorial valuations, i <= 10") {
    for (std::uint32_t q : {2u, 3u}) {
        const Field f = Field::of_order(q);
        const CarlitzCache c(f, 10);
        std::int64_t qi = 1;
        for (std::size_t i = 0; i <= 10; ++i) {
            CHECK(valuation(c.D(i)) == ValExp((qi - 1) / (q - 1)));
            CHECK(valuation(c.L(i)) == ValExp(static_cast<std::int64_t>(i)));
            qi *= q;
        }
    }
    CHECK_THROWS_AS(CarlitzCache(Field::of_order(5), 12), Error);
}

TEST_CASE("k_binomial examples") {
    const CarlitzCache c2(Field::create(2), 6);
    for (std::size_t i = 0; i <= 6; ++i) {
        CHECK(k_binomial(c2, i, 0).is_one());
        CHECK(k_binomial(c2, i, i).is_one());
    }
    CHECK(k_binomial(c2, 2, 1) == P(c2.field(), "x^2+x+1"));
    const Field f3 = Field::create(3);
    const CarlitzCache c3(f3, 3);
    CHECK(k_binomial(c3, 2, 1) == exact_div(P(f3, "x^9-x"), P(f3, "x^3-x")));
    CHECK(k_binomial(c3, 2, 1) == P(f3, "x^6+x^4+x^2+1"));
}

TEST_CASE("carlitz_e examples") {
    const Field f2 = Field::create(2);
    const CarlitzCache c(f2, 4);
    CHECK(carlitz_e(c, 0) == LinPoly::identity(f2));
    CHECK(carlitz_e(c, 1) == LinPoly(f2, {RatFn::one(f2), RatFn::one(f2)}));
    for (std::size_t i = 0; i <= 4; ++i) CHECK(carlitz_e(c, i).coeffs().back().is_one());
}

TEST_CASE("e_i vanishes on polynomials of degree < i") {
    for (std::uint32_t q : {2u, 3u}) {
        const Field f = Field::of_order(q);
        const CarlitzCache c(f, 4);
        for (std::size_t i = 1; i <= 4; ++i) {
            const LinPoly e = carlitz_e(c, i);
            bool all_zero = true;
            for (const Poly& s : polys_below(f, i)) all_zero &= lin_eval(e, RatFn(s)).is_zero();
            CHECK(all_zero);
            // ... and not on x^i.
            CHECK_FALSE(lin_eval(e, RatFn(Poly::monomial(f, 1, i))).is_zero());
        }
    }
}

TEST_CASE("carlitz_e agrees with the product over polynomials") {
    const std::pair<std::uint32_t, std::size_t> cases[] = {{2, 4}, {3, 3}, {4, 2}, {5, 2}, {7, 2}, {8, 2}};
    for (auto [q, top] : cases) {
        const CarlitzCache c(Field::of_order(q), top);
        CAPTURE(q);
        for (std::size_t i = 0; i <= top; ++i) {
            CAPTURE(i);
            CHECK(carlitz_e_oracle(c, i) == carlitz_e(c, i));
        }
    }
    const CarlitzCache c2(Field::create(2), 1);
    CHECK(carlitz_e_oracle(c2, 0) == LinPoly::identity(c2.field()));
    const CarlitzCache c3(Field::create(3), 6);
    try {
        carlitz_e_oracle(c3, 6);
        FAIL("expected EnumerationTooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::EnumerationTooLarge);
    }
    CHECK_THROWS_AS(carlitz_e_oracle(CarlitzCache(Field::create(5), 4), 4), Error);
}

TEST_CASE("carlitz_f examples") {
    const Field f2 = Field::create(2);
    const CarlitzCache c(f2, 5);
    CHECK(carlitz_f(c, 0) == LinPoly::identity(f2));
    CHECK(lin_eval(carlitz_f(c, 1), RatFn::x(f2)).is_one());
    for (std::size_t i = 0; i <= 5; ++i)
        CHECK(carlitz_f(c, i).coeffs().back() == RatFn(Poly::constant(f2, 1), c.D(i)));
}

TEST_CASE("carlitz_module examples") {
    for (std::uint32_t q : {2u, 3u, 5u}) {
        const Field f = Field::of_order(q);
        const CarlitzCache c(f, 3);
        // C_x(z) = x z + z^q
        CHECK(carlitz_module(c, Poly::x(f)) == LinPoly(f, {RatFn::x(f), RatFn::one(f)}));
        CHECK(carlitz_module(c, Poly::constant(f, 1)) == LinPoly::identity(f));
        CHECK(carlitz_module(c, Poly(f)).is_zero());
    }
}

TEST_CASE("module composition C_{ts} = C_t o C_s") {
    for (std::uint32_t q : {2u, 3u}) {
        const Field f = Field::of_order(q);
        const CarlitzCache c(f, 4);
        const std::vector<Poly> all = polys_below(f, 3);
        std::vector<LinPoly> mods;
        for (const Poly& s : all) mods.push_back(carlitz_module(c, s));
        bool ok = true;
        for (std::size_t a = 0; a < all.size(); ++a)
            for (std::size_t b = 0; b < all.size(); ++b) {
                ok &= lin_compose(mods[a], mods[b]) == carlitz_module(c, all[a] * all[b]);
                ok &= mods[a] + mods[b] == carlitz_module(c, all[a] + all[b]);
            }
        CHECK(ok);
    }
}

TEST_CASE("K-binomial relation for e_i") {
    for (std::uint32_t q : {2u, 3u}) {
        const Field f = Field::of_order(q);
        const CarlitzCache c(f, 6);
        std::vector<LinPoly> e;
        for (std::size_t i = 0; i <= 6; ++i) e.push_back(carlitz_e(c, i));
        for (std::size_t i = 0; i <= 6; ++i) {
            CAPTURE(q);
            CAPTURE(i);
            BiLinPoly rhs(f);
            for (std::size_t n = 0; n <= i; ++n)
                bilin_accumulate_into(rhs, {RatFn(k_binomial(c, i, n)), e[n], e[i - n], static_cast<unsigned>(n)});
            CHECK(rhs == subst_st(e[i]));
        }
    }
}
