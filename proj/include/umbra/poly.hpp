#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "umbra/gf.hpp"

namespace umbra {

/// Dense univariate polynomial over F_q; coefficient index = exponent of x.
///
/// Canonical form has no trailing zero coefficients, so the zero polynomial
/// has an empty coefficient vector and no degree (`degree()` is nullopt).
class Poly {
public:
    using Rep = Field::Rep;

    explicit Poly(Field field) : field_(std::move(field)) {}
    Poly(Field field, std::vector<Rep> coeffs);

    static Poly constant(const Field& f, Rep c);
    static Poly from_int(const Field& f, std::int64_t c) { return constant(f, f.from_int(c)); }
    static Poly monomial(const Field& f, Rep c, std::size_t exponent);
    static Poly x(const Field& f) { return monomial(f, 1, 1); }
    /// x^a - x^b; used for brackets and their Frobenius images.
    static Poly binomial(const Field& f, std::size_t a, std::size_t b);

    const Field& field() const noexcept { return field_; }
    std::span<const Rep> coeffs() const noexcept { return c_; }
    std::size_t size() const noexcept { return c_.size(); }
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }
    std::optional<std::size_t> degree() const noexcept;
    Rep coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
    /// Leading coefficient; zero for the zero polynomial.
    Rep lead() const noexcept { return c_.empty() ? 0 : c_.back(); }
    bool is_monic() const noexcept { return !c_.empty() && c_.back() == 1; }
    /// Order of vanishing at x = 0; nullopt for zero.
    std::optional<std::size_t> ord() const noexcept;
    std::size_t nonzero_terms() const noexcept;

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);

    Poly scale(Rep c) const;
    Poly monic() const;
    /// Multiplies by x^k.
    Poly shift_up(std::size_t k) const;
    /// Drops the lowest k coefficients (division by x^k, truncating).
    Poly shift_down(std::size_t k) const;
    /// Keeps the coefficients of x^0..x^{n-1}.
    Poly truncate(std::size_t n) const;
    /// p(x)^(q^k) = p(x^(q^k)) since coefficients are fixed by Frobenius.
    Poly frobenius(unsigned k) const;
    /// The q-th root if every exponent is divisible by q.
    std::optional<Poly> qth_root() const;

    FqElem eval(const FqElem& at) const;

    friend bool operator==(const Poly& a, const Poly& b) noexcept {
        return a.field_ == b.field_ && a.c_ == b.c_;
    }

private:
    void trim() noexcept;
    void check_same(const Poly& o) const;

    Field field_;
    std::vector<Rep> c_;
};

/// Quotient and remainder; throws Errc::DivisionByZero.
std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b);
Poly rem(const Poly& a, const Poly& b);
/// a / b when b divides a; throws Errc::NotPolynomial otherwise.
Poly exact_div(const Poly& a, const Poly& b);
/// Monic gcd; gcd(0, 0) = 0.
Poly gcd(const Poly& a, const Poly& b);
Poly pow(const Poly& a, std::uint64_t e);

namespace kernels {

// Reference algorithms, kept callable so tests can cross-check the
// dispatching versions above against them.
Poly mul_schoolbook(const Poly& a, const Poly& b);
std::pair<Poly, Poly> divrem_schoolbook(const Poly& a, const Poly& b);
Poly gcd_euclid(const Poly& a, const Poly& b);

Poly mul_fast(const Poly& a, const Poly& b);
std::pair<Poly, Poly> divrem_fast(const Poly& a, const Poly& b);
Poly gcd_fast(const Poly& a, const Poly& b);

}  // namespace kernels

}  // namespace umbra
