#include <memory>

#include "doctest.h"
#include "support.hpp"
#include "umbra/error.hpp"
#include "umbra/expr.hpp"
#include "umbra/genfun.hpp"
#include "umbra/laurent.hpp"

using namespace umbra;
using umbra::testing::Rng;

namespace {

LaurentSeries series(const Field& f, std::int64_t lead, std::vector<Field::Rep> c, std::int64_t prec) {
    return LaurentSeries(f, lead, std::move(c), prec);
}

std::shared_ptr<const CarlitzCache> cache_for(std::uint32_t q, std::size_t n) {
    return std::make_shared<const CarlitzCache>(Field::of_order(q), n);
}

// Nonzero rational function with a pole of order up to 3 at x = 0.
RatFn sample(Rng& rng, const Field& f) {
    const Poly pole = Poly::monomial(f, 1, static_cast<std::size_t>(rng.below(4)));
    return rng.nonzero_ratfn(f, 5) * RatFn(Poly::constant(f, 1), pole);
}

}  // namespace

TEST_CASE("ratfn_to_laurent examples") {
    const Field f2 = Field::of_order(2);
    const LaurentSeries g = LaurentSeries::from_ratfn(parse_ratfn("1/(1+x)", f2), 4);
    CHECK(g == series(f2, 0, {1, 1, 1, 1}, 4));
    CHECK(g.to_string() == "1+x+x^2+x^3+O(x^4)");

    const LaurentSeries c = LaurentSeries::from_ratfn(parse_ratfn("x^3", f2), 10);
    CHECK(c.valuation() == std::optional<std::int64_t>(3));
    CHECK(c.precision() == 10);
    CHECK(c.coeffs().size() == 1);

    const LaurentSeries inv_x = LaurentSeries::from_ratfn(parse_ratfn("1/x", f2), 5);
    CHECK(inv_x.lead() == -1);
    CHECK(inv_x.valuation() == std::optional<std::int64_t>(-1));
    CHECK(inv_x.to_string() == "x^-1+O(x^5)");

    // Back-multiplication by the denominator recovers the numerator.
    const Field f5 = Field::of_order(5);
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const RatFn r = sample(rng, f5);
        const LaurentSeries s = LaurentSeries::from_ratfn(r, 20);
        const LaurentSeries back = s * LaurentSeries::from_poly(r.den(), 40);
        CHECK(back.agrees_with(LaurentSeries::from_poly(r.num(), 40)));
        CHECK(back.precision() >= 20 + valuation(r.den()).value());
    }
    // Values vanishing to precision keep only their precision.
    CHECK(LaurentSeries::from_ratfn(parse_ratfn("x^7", f2), 5).is_zero());
    CHECK(LaurentSeries::from_ratfn(parse_ratfn("x^7", f2), 5).valuation_floor() == 5);
}

TEST_CASE("laurent arithmetic") {
    const Field f2 = Field::of_order(2);
    const LaurentSeries b1 = LaurentSeries::from_ratfn(parse_ratfn("x^2+x", f2), 30);
    CHECK((b1 * b1) == series(f2, 2, {1, 0, 1}, 31));

    const LaurentSeries z = LaurentSeries::from_ratfn(parse_ratfn("(x+x^3)/(1+x^2+x^5)", f2), 12);
    const LaurentSeries zi = z.inv();
    CHECK(zi.valuation() == std::optional<std::int64_t>(-1));
    CHECK(zi.precision() == 10);
    const LaurentSeries one = z * zi;
    CHECK(one.precision() == 11);
    CHECK(one.agrees_with(LaurentSeries(f2, 0, {1}, 100)));

    const LaurentSeries a = series(f2, 0, {1, 1, 0, 1}, 8);
    const LaurentSeries b = series(f2, 1, {1, 1}, 3);
    const LaurentSeries s = a + b;
    CHECK(s.precision() == 3);
    CHECK(s == series(f2, 0, {1, 0, 1}, 3));
    CHECK((a - a).is_zero());
    CHECK((a - a).precision() == 8);

    try {
        LaurentSeries(f2, 6).inv();
        FAIL("expected ZeroToPrecision");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ZeroToPrecision);
    }

    // Frobenius: exponents scale by q, so does the precision.
    const Field f3 = Field::of_order(3);
    const LaurentSeries w = series(f3, -1, {2, 0, 1}, 4);
    CHECK(w.frobenius(1) == series(f3, -3, {2, 0, 0, 0, 0, 0, 1}, 12));
    CHECK(w.frobenius(2, 0).precision() == 0);
}

TEST_CASE("laurent embedding is a ring homomorphism to precision") {
    for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
        const Field f = Field::of_order(q);
        Rng rng(100 + q);
        for (int i = 0; i < 40; ++i) {
            const RatFn r = sample(rng, f);
            const RatFn s = sample(rng, f);
            const std::int64_t p = 24;
            const auto lr = LaurentSeries::from_ratfn(r, p);
            const auto ls = LaurentSeries::from_ratfn(s, p);
            const auto sum = lr + ls;
            const auto prod = lr * ls;
            CHECK(sum.agrees_with(LaurentSeries::from_ratfn(r + s, p)));
            CHECK(sum.precision() == p);
            CHECK(prod.agrees_with(LaurentSeries::from_ratfn(r * s, 2 * p)));
            CHECK(prod.precision() == p + std::min(valuation(r).value(), valuation(s).value()));
            CHECK(lr.inv().agrees_with(LaurentSeries::from_ratfn(r.inv(), 2 * p)));
            CHECK(lr.frobenius(1).agrees_with(LaurentSeries::from_ratfn(r.frobenius(1), q * p)));
        }
    }
}

TEST_CASE("factorials embedded at x = 0") {
    for (std::uint32_t q : {2u, 3u}) {
        const auto cache = cache_for(q, 8);
        for (std::size_t i = 1; i <= 8; ++i) {
            const std::int64_t vd = (static_cast<std::int64_t>(cache->qpow(i)) - 1) / (q - 1);
            CHECK(LaurentSeries::from_poly(cache->D(i), vd + 4).valuation() == std::optional<std::int64_t>(vd));
            CHECK(LaurentSeries::from_poly(cache->L(i), 20).valuation() ==
                  std::optional<std::int64_t>(static_cast<std::int64_t>(i)));
        }
    }
}

TEST_CASE("evaluation of the Carlitz exponential") {
    const auto cache = cache_for(2, 8);
    const Field& f = cache->field();
    const DeltaOperator op = DeltaOperator::make(SigmaSpec::carlitz(), 8, cache);
    const std::vector<RatFn> b = exp_series(op, 8).coeffs();
    const LaurentSeries lam = LaurentSeries::from_ratfn(parse_ratfn("x^2", f), 64);

    // C_x(e_C(lam)) = e_C(x lam).
    const LaurentSeries e = eval_lin_series(b, lam, 16);
    CHECK(e.precision() == 16);
    CHECK(e.valuation() == std::optional<std::int64_t>(2));
    const LaurentSeries lhs = eval_lin_poly(carlitz_module(*cache, Poly::x(f)).coeffs(), e, 16);
    const LaurentSeries x = LaurentSeries::from_ratfn(RatFn::x(f), 64);
    const LaurentSeries rhs = eval_lin_series(b, x * lam, 16);
    CHECK(lhs.precision() >= 16);
    CHECK(lhs.agrees_with(rhs));

    // Stable under increasing precision.
    CHECK(eval_lin_series(b, lam, 12).agrees_with(e));

    // log then exp returns the point.
    const std::vector<RatFn> beta = log_series(op, 8).coeffs();
    const LaurentSeries lg = eval_lin_series(beta, lam, 12);
    CHECK(eval_lin_series(b, lg, 12).agrees_with(lam));

    // On the boundary of the q = 2 disk the terms stop shrinking.
    const LaurentSeries at_x = LaurentSeries::from_ratfn(RatFn::x(f), 64);
    try {
        eval_lin_series(b, at_x, 12);
        FAIL("expected DivergentAtPoint");
    } catch (const Error& err) {
        CHECK(err.code() == Errc::DivergentAtPoint);
        CHECK(err.index() == 1u);
    }
    // Too few terms for the precision.
    try {
        eval_lin_series(std::vector<RatFn>(b.begin(), b.begin() + 3), lam, 16);
        FAIL("expected OrderExceeded");
    } catch (const Error& err) {
        CHECK(err.code() == Errc::OrderExceeded);
    }
}

TEST_CASE("disk boundaries for q != 2") {
    for (std::uint32_t q : {3u, 4u, 5u}) {
        const auto cache = cache_for(q, 5);
        const Field& f = cache->field();
        for (const char* name : {"carlitz", "laguerre"}) {
            const DeltaOperator op = DeltaOperator::make(SigmaSpec::preset(name), 5, cache);
            const std::vector<RatFn> b = exp_series(op, 5).coeffs();
            const LaurentSeries at_x = LaurentSeries::from_ratfn(RatFn::x(f), 64);
            CHECK(eval_lin_series(b, at_x, 6).valuation() == std::optional<std::int64_t>(1));
            try {
                eval_lin_series(b, LaurentSeries::from_ratfn(RatFn::one(f), 64), 6);
                FAIL("expected DivergentAtPoint");
            } catch (const Error& err) {
                CHECK(err.code() == Errc::DivergentAtPoint);
            }
        }
    }
}

TEST_CASE("expansion at a point of the disk") {
    for (const char* name : {"carlitz", "laguerre"}) {
        const auto cache = cache_for(2, 6);
        const Field& f = cache->field();
        const DeltaOperator op = DeltaOperator::make(SigmaSpec::preset(name), 6, cache);
        const BasicSequence seq = BasicSequence::make(op, 6);
        const LaurentSeries lam = LaurentSeries::from_ratfn(parse_ratfn("x^2", f), 64);

        const PointExpansionReport r = point_expansion_check(op, seq, lam, RatFn::x(f), 12);
        CHECK(r.ok);
        CHECK(r.lhs.precision() == 12);

        // t = 1 leaves e_delta(lam) on both sides.
        const PointExpansionReport one = point_expansion_check(op, seq, lam, RatFn::one(f), 12);
        CHECK(one.ok);
        CHECK(one.lhs.agrees_with(eval_lin_series(exp_series(op, 6).coeffs(), lam, 12)));

        Rng rng(9);
        for (int i = 0; i < 10; ++i) {
            const Poly t = rng.poly(f, 4);
            CHECK(point_expansion_check(op, seq, lam, RatFn(t), 10).ok);
        }
        // A perturbed sequence breaks the identity.
        const BasicSequence bad = seq.perturbed(1, 1, RatFn::one(f));
        CHECK_FALSE(point_expansion_check(op, bad, lam, RatFn::x(f), 12).ok);
    }
}

TEST_CASE("the logarithm does not increase the absolute value on the disk") {
    for (std::uint32_t q : {2u, 3u, 5u}) {
        // Enough levels for precision 12; the exact logarithm grows fast in q.
        const std::size_t m = q == 2 ? 7 : q == 3 ? 6 : 5;
        const auto cache = cache_for(q, m);
        const Field& f = cache->field();
        const std::int64_t min_v = q == 2 ? 2 : 1;
        for (const char* name : {"carlitz", "laguerre"}) {
            const DeltaOperator op = DeltaOperator::make(SigmaSpec::preset(name), m, cache);
            const std::vector<RatFn> beta = log_series(op, m).coeffs();
            Rng rng(40 + q);
            for (int i = 0; i < 10; ++i) {
                const Poly u = rng.nonzero_poly(f, 3).shift_up(static_cast<std::size_t>(min_v + rng.below(2)));
                const LaurentSeries lam = LaurentSeries::from_poly(u, 64);
                const LaurentSeries lg = eval_lin_series(beta, lam, 12);
                CHECK(lg.valuation_floor() >= *lam.valuation());
            }
        }
    }
}
