#include "doctest.h"
#include "support.hpp"
#include "umbra/error.hpp"
#include "umbra/expr.hpp"

using namespace umbra;
using umbra::testing::Rng;

TEST_CASE("parse_ratfn examples") {
    const Field f2 = Field::create(2);
    const RatFn r = parse_ratfn("(x^2+1)/(x^3+x)", f2);
    // x^2+1 = (x+1)^2 and x^3+x = x(x+1)^2 over F_2.
    CHECK(gcd(parse_poly("x^2+1", f2), parse_poly("x^3+x", f2)) == parse_poly("x^2+1", f2));
    CHECK(r == parse_ratfn("1/x", f2));
    CHECK(to_string(r) == "1/x");
    CHECK(parse_ratfn("1", f2).is_one());
    CHECK(parse_ratfn(" 3 ", f2).is_one());
}

TEST_CASE("parse errors carry positions") {
    const Field f3 = Field::create(3);
    try {
        parse_ratfn("x^(-1)", f3);
        FAIL("expected SyntaxError");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SyntaxError);
        CHECK(e.index() == 2u);
    }
    try {
        parse_ratfn("x + y", f3);
        FAIL("expected UnknownSymbol");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnknownSymbol);
        CHECK(e.index() == 4u);
    }
    for (const char* bad : {"", "x+", "(x", "2x", "x^", "[1,2", "x)"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_ratfn(bad, f3), Error);
    }
    CHECK_THROWS_AS(parse_ratfn("[1,1]", f3), Error);  // nu = 1
    CHECK_THROWS_AS(parse_ratfn("1/(x-x)", f3), Error);
}

TEST_CASE("precedence and unary minus") {
    const Field f5 = Field::create(5);
    CHECK(parse_ratfn("-x^2", f5) == -parse_ratfn("x^2", f5));
    CHECK(parse_ratfn("2*x^2/x", f5) == parse_ratfn("2*x", f5));
    CHECK(parse_ratfn("1/x/x", f5) == parse_ratfn("1/x^2", f5));
    CHECK(parse_ratfn("(x+1)^2", f5) == parse_ratfn("x^2+2*x+1", f5));
    CHECK(parse_ratfn("7", f5) == RatFn::from_int(f5, 2));
    CHECK(to_string(parse_ratfn("x^2-1", f5)) == "x^2+4");
    CHECK(to_string(parse_ratfn("3*x^3/(x+1)", f5)) == "3*x^3/(x+1)");
}

TEST_CASE("extension-field literals") {
    const Field f4 = Field::create(2, 2);
    const RatFn g = parse_ratfn("[0,1]", f4);
    CHECK(g * g == parse_ratfn("[1,1]", f4));
    CHECK(to_string(parse_ratfn("[0,1]*x^2+x+[1,1]", f4)) == "[0,1]*x^2+x+[1,1]");
}

TEST_CASE("print then parse is the identity") {
    Rng rng(42);
    for (std::uint32_t q : {2u, 3u, 4u, 5u, 9u}) {
        const Field f = Field::of_order(q);
        for (int i = 0; i < 50; ++i) {
            const RatFn r = rng.ratfn(f, 6);
            CHECK(parse_ratfn(to_string(r), f) == r);
        }
    }
}
