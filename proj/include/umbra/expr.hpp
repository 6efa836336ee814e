#pragma once

#include <string>
#include <string_view>

#include "umbra/ratfn.hpp"

namespace umbra {

// Text form of F_q(x) elements.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | atom ('^' digits)?
//   atom   := 'x' | digits | '[' digits (',' digits)* ']' | '(' expr ')'
//
// Decimal integers are reduced mod p; bracketed literals are coordinate
// vectors (constant term first) of extension-field elements. Exponents are
// non-negative decimal literals only, so "x^(-1)" is rejected.
//
// Canonical print: terms in descending exponent, the monic denominator after
// '/', parentheses around multi-term numerators and denominators, "num/den"
// collapsed to "num" when den = 1.

/// Throws Errc::SyntaxError (index = character offset) or Errc::UnknownSymbol.
RatFn parse_ratfn(std::string_view text, const Field& field);
Poly parse_poly(std::string_view text, const Field& field);

std::string to_string(const Poly& p);
std::string to_string(const RatFn& r);

}  // namespace umbra
