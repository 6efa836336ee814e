#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "umbra/umbral.hpp"

namespace umbra {

/// Element of F_q((x)) known modulo x^P (absolute precision).
///
/// Stored as coefficients of x^lead, x^(lead+1), ... below P with a nonzero
/// leading coefficient, or no coefficients at all when the value is zero to
/// precision. Arithmetic tracks precision by the ultrametric rules:
/// prec(a+b) = min(prec a, prec b), prec(ab) = min(prec a + v b, prec b + v a),
/// where a value zero to precision P counts as having valuation P.
class LaurentSeries {
public:
    /// Zero modulo x^prec.
    LaurentSeries(Field field, std::int64_t prec);
    /// sum_i coeffs[i] x^(lead+i) modulo x^prec; normalizes.
    LaurentSeries(Field field, std::int64_t lead, std::vector<Field::Rep> coeffs, std::int64_t prec);

    /// Expansion of a polynomial or rational function at x = 0 to precision P.
    static LaurentSeries from_ratfn(const RatFn& r, std::int64_t prec);
    static LaurentSeries from_poly(const Poly& p, std::int64_t prec);

    const Field& field() const noexcept { return field_; }
    std::int64_t precision() const noexcept { return prec_; }
    /// True when no coefficient below the precision is nonzero.
    bool is_zero() const noexcept { return c_.empty(); }
    /// Order of the first nonzero coefficient; nullopt when zero to precision.
    std::optional<std::int64_t> valuation() const noexcept;
    /// valuation(), or the precision for a value zero to precision.
    std::int64_t valuation_floor() const noexcept { return c_.empty() ? prec_ : lead_; }
    /// Coefficient of x^e; e must be below the precision.
    Field::Rep coeff(std::int64_t e) const;
    std::int64_t lead() const noexcept { return lead_; }
    const std::vector<Field::Rep>& coeffs() const noexcept { return c_; }

    /// Same value with precision lowered to min(prec, p).
    LaurentSeries truncate(std::int64_t p) const;

    LaurentSeries operator-() const;
    friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b);
    friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b);
    friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);
    /// Errc::ZeroToPrecision when the value is zero to its precision.
    LaurentSeries inv() const;
    /// z^(q^k), precision q^k P, capped at `cap` when given.
    LaurentSeries frobenius(unsigned k, std::optional<std::int64_t> cap = std::nullopt) const;

    /// Agreement of the overlap: coefficients below min(prec a, prec b).
    bool agrees_with(const LaurentSeries& o) const;
    /// First exponent below min(prec) where a and b differ.
    std::optional<std::int64_t> first_difference(const LaurentSeries& o) const;

    /// "x^-1 + 1 + x^2 + O(x^4)" style, coefficients as in Poly::to_string.
    std::string to_string() const;

    friend bool operator==(const LaurentSeries& a, const LaurentSeries& b) noexcept {
        return a.field_ == b.field_ && a.prec_ == b.prec_ && a.lead_ == b.lead_ && a.c_ == b.c_;
    }

private:
    void normalize();

    Field field_;
    std::int64_t lead_ = 0;
    std::vector<Field::Rep> c_;
    std::int64_t prec_;
};

/// sum_j b_j lam^(q^j) to absolute precision P.
///
/// Every term after the first nonzero one must have larger valuation
/// v(b_j) + q^j v(lam) than it, otherwise Errc::DivergentAtPoint carrying j.
/// For series with v(b_j) = -(q^j - 1)/(q - 1) this is exactly the disk
/// v(lam) >= 1 (q != 2), v(lam) >= 2 (q = 2). Summation stops once three
/// consecutive terms have valuation above P; Errc::OrderExceeded if `b`
/// runs out first.
LaurentSeries eval_lin_series(const std::vector<RatFn>& b, const LaurentSeries& lam, std::int64_t prec);

/// A finite F_q-linear polynomial sum_j a_j z^(q^j) at a Laurent point.
LaurentSeries eval_lin_poly(const std::vector<RatFn>& a, const LaurentSeries& z, std::int64_t prec);

/// e_delta(lam t) against sum_n Q_n(t) e_delta(lam)^(q^n) at a point
/// lam of the convergence disk and t with v(t) >= 0, both to precision P.
/// Uses the levels of `op` and `seq`; Errc::OrderExceeded if they are too
/// few for the requested precision, Errc::DivergentAtPoint outside the disk.
struct PointExpansionReport {
    bool ok = false;
    LaurentSeries lhs;
    LaurentSeries rhs;
    /// First exponent where the sides differ.
    std::optional<std::int64_t> first_difference;
    /// Number of Q_n terms summed.
    std::size_t terms = 0;
};
PointExpansionReport point_expansion_check(const DeltaOperator& op, const BasicSequence& seq,
                                           const LaurentSeries& lam, const RatFn& t, std::int64_t prec);

}  // namespace umbra
