#include <memory>

#include "doctest.h"
#include "support.hpp"
#include "umbra/error.hpp"
#include "umbra/genfun.hpp"

using namespace umbra;

namespace {

std::shared_ptr<const CarlitzCache> cache_for(std::uint32_t q, std::size_t n) {
    return std::make_shared<const CarlitzCache>(Field::of_order(q), n);
}

DeltaOperator op_for(const char* preset, const std::shared_ptr<const CarlitzCache>& cache) {
    return DeltaOperator::make(SigmaSpec::preset(preset), cache->order(), cache);
}

const char* const kPresets[] = {"carlitz", "laguerre", "example2"};

std::int64_t geometric(std::int64_t q, std::size_t j) {
    std::int64_t s = 0;
    for (std::size_t i = 0, p = 1; i < j; ++i, p *= static_cast<std::size_t>(q)) s += static_cast<std::int64_t>(p);
    return s;
}

}  // namespace

TEST_CASE("exp_series examples") {
    for (std::uint32_t q : {2u, 3u}) {
        const auto cache = cache_for(q, 6);
        const Field& f = cache->field();
        const FormalLinSeries e = exp_series(op_for("carlitz", cache), 6);
        CHECK(e.order() == 6);
        for (std::size_t j = 0; j <= 6; ++j) CHECK(e.coeff(j) == RatFn(Poly::constant(f, 1), cache->D(j)));
        CHECK(exp_series(op_for("example2", cache), 3).coeff(1) == RatFn::one(f));
        for (const char* name : kPresets) CHECK(exp_series(op_for(name, cache), 4).coeff(0) == RatFn::one(f));
    }
    const auto cache = cache_for(2, 3);
    try {
        exp_series(op_for("laguerre", cache), 4);
        FAIL("expected OrderExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::OrderExceeded);
    }
}

TEST_CASE("log_series examples") {
    for (std::uint32_t q : {2u, 3u}) {
        const auto cache = cache_for(q, 6);
        const Field& f = cache->field();
        const FormalLinSeries l = log_series(op_for("carlitz", cache), 6);
        for (std::size_t n = 0; n <= 6; ++n) {
            const RatFn expect(Poly::constant(f, 1), cache->L(n));
            CHECK(l.coeff(n) == (n % 2 == 0 ? expect : -expect));
        }
        for (const char* name : kPresets) {
            const DeltaOperator op = op_for(name, cache);
            CHECK(log_series(op, 3).coeff(1) == -exp_series(op, 3).coeff(1));
        }
    }
}

TEST_CASE("series composition and inversion") {
    for (std::uint32_t q : {2u, 3u, 4u}) {
        // Level 6 at q = 4 costs seconds per composite; level 5 is enough there.
        const std::size_t m = q == 4 ? 5 : 6;
        const auto cache = cache_for(q, m);
        const Field& f = cache->field();
        for (const char* name : kPresets) {
            CAPTURE(q);
            CAPTURE(name);
            const DeltaOperator op = op_for(name, cache);
            const FormalLinSeries e = exp_series(op, m);
            const FormalLinSeries l = compositional_inverse(e);
            CHECK_FALSE(identity_mismatch(series_compose(e, l)));
            CHECK_FALSE(identity_mismatch(series_compose(l, e)));
            CHECK(series_compose(e, FormalLinSeries::identity(f, m)) == e);
            CHECK(series_compose(FormalLinSeries::identity(f, m), l) == l);
        }
    }
    // Composition truncates at the smaller order and matches lin_compose.
    const auto cache = cache_for(3, 5);
    const Field& f = cache->field();
    umbra::testing::Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const LinPoly u = rng.linpoly(f, 3, 3, 2);
        const LinPoly v = rng.linpoly(f, 4, 3, 2);
        const FormalLinSeries c = series_compose(FormalLinSeries::from_linpoly(u, 5), FormalLinSeries::from_linpoly(v, 2));
        CHECK(c.order() == 2);
        CHECK(c == FormalLinSeries::from_linpoly(lin_compose(u, v), 2));
    }
    // A perturbed inverse is caught at the perturbed level.
    const FormalLinSeries e = exp_series(op_for("laguerre", cache), 5);
    FormalLinSeries l = compositional_inverse(e);
    l.set(3, l.coeff(3) + RatFn::one(f));
    CHECK(identity_mismatch(series_compose(e, l)) == std::optional<std::size_t>(3));
    CHECK(identity_mismatch(series_compose(l, e)) == std::optional<std::size_t>(3));
}

TEST_CASE("fixed point of the delta operator") {
    for (std::uint32_t q : {2u, 3u, 5u}) {
        const auto cache = cache_for(q, 6);
        const Field& f = cache->field();
        for (const char* name : kPresets) {
            const DeltaOperator op = op_for(name, cache);
            CHECK(delta_fixed_point_check(op, exp_series(op, 6)).ok);
        }
        // The Carlitz case is [n]/D_n = (1/D_{n-1})^q.
        for (std::size_t n = 1; n <= 6; ++n)
            CHECK(RatFn(cache->bracket(n), cache->D(n)) ==
                  RatFn(Poly::constant(f, 1), cache->D(n - 1)).frobenius(1));
        FormalLinSeries e = exp_series(op_for("laguerre", cache), 5);
        e.set(2, e.coeff(2) + RatFn::one(f));
        const FixedPointReport r = delta_fixed_point_check(op_for("laguerre", cache), e);
        CHECK_FALSE(r.ok);
        CHECK(r.first_failure == std::optional<std::size_t>(2));
    }
}

TEST_CASE("generating function identity") {
    for (std::uint32_t q : {2u, 3u}) {
        const auto cache = cache_for(q, 4);
        const Field& f = cache->field();
        for (const char* name : kPresets) {
            CAPTURE(q);
            CAPTURE(name);
            const DeltaOperator op = op_for(name, cache);
            const BasicSequence seq = BasicSequence::make(op, 4);
            const GeneratingReport r = generating_identity_check(op, seq, 4);
            CHECK(r.ok);
            CHECK(r.lhs.at(0, 0) == RatFn::one(f));
            CHECK(r.rhs.at(0, 0) == RatFn::one(f));
        }
        const DeltaOperator op = op_for("laguerre", cache);
        const BasicSequence seq = BasicSequence::make(op, 4);
        const FormalLinSeries e = exp_series(op, 4);
        FormalLinSeries l = compositional_inverse(e);
        l.set(2, l.coeff(2) + RatFn::one(f));
        const GeneratingReport bad = generating_identity_check(e, l, seq);
        CHECK_FALSE(bad.ok);
        CHECK(bad.first_difference == std::optional<Entry>(Entry{0, 2}));
    }
}

TEST_CASE("Carlitz functional equation as truncated series") {
    for (std::uint32_t q : {2u, 3u}) {
        const auto cache = cache_for(q, 4);
        const Field& f = cache->field();
        const FormalLinSeries e = exp_series(op_for("carlitz", cache), 4);
        // Every s with deg s <= 2, digits enumerated directly.
        for (std::uint32_t code = 1; code < q * q * q; ++code) {
            std::vector<Field::Rep> digits{code % q, code / q % q, code / (q * q)};
            const Poly s(f, digits);
            const RatFn sr(s);
            const FormalLinSeries lhs = series_compose(FormalLinSeries::from_linpoly(carlitz_module(*cache, s), 4), e);
            std::vector<RatFn> rhs;
            for (std::size_t j = 0; j <= 4; ++j) rhs.push_back(e.coeff(j) * sr.frobenius(static_cast<unsigned>(j)));
            CHECK(lhs == FormalLinSeries(f, rhs));
        }
    }
}

TEST_CASE("valuation profile") {
    for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
        const auto cache = cache_for(q, 8);
        for (const char* name : {"carlitz", "laguerre"}) {
            CAPTURE(q);
            CAPTURE(name);
            const ValuationReport r = valuation_profile(op_for(name, cache), 8);
            CHECK(r.status == ValuationReport::Status::Holds);
            for (std::size_t j = 0; j <= 8; ++j) {
                CHECK(-r.b_val[j] == geometric(q, j));
                CHECK(r.beta_floor[j] >= -geometric(q, j));
            }
            if (std::string(name) == "carlitz")
                for (std::size_t j = 0; j <= 8; ++j) CHECK(r.beta_val[j] == std::optional<std::int64_t>(-static_cast<std::int64_t>(j)));
        }
        const ValuationReport ex2 = valuation_profile(op_for("example2", cache), 8);
        CHECK(ex2.status == ValuationReport::Status::HypothesisNotMet);
        CHECK(ex2.hypothesis_index == std::optional<std::size_t>(1));
    }
}

TEST_CASE("valuation profile agrees with exact valuations") {
    for (std::uint32_t q : {2u, 3u}) {
        const auto cache = cache_for(q, 5);
        for (const char* name : {"carlitz", "laguerre"}) {
            const DeltaOperator op = op_for(name, cache);
            const ValuationReport r = valuation_profile(op, 5);
            const FormalLinSeries e = exp_series(op, 5);
            const FormalLinSeries l = compositional_inverse(e);
            for (std::size_t j = 0; j <= 5; ++j) {
                CAPTURE(j);
                CHECK(r.b_val[j] == valuation(e.coeff(j)).value());
                const ValExp vb = valuation(l.coeff(j));
                if (r.beta_val[j]) {
                    CHECK(vb == ValExp(*r.beta_val[j]));
                } else {
                    CHECK(vb >= ValExp(r.beta_floor[j]));
                }
            }
        }
    }
}
