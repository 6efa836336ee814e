#pragma once

#include <compare>
#include <cstdint>
#include <optional>

#include "umbra/poly.hpp"

namespace umbra {

/// x-adic valuation exponent; an empty value stands for +infinity (v(0)).
/// The absolute value is |r| = q^{-v}.
class ValExp {
public:
    ValExp() = default;  // +infinity
    explicit ValExp(std::int64_t v) : v_(v) {}
    static ValExp infinity() { return ValExp(); }

    bool is_infinite() const noexcept { return !v_.has_value(); }
    std::int64_t value() const { return v_.value(); }

    friend bool operator==(const ValExp&, const ValExp&) = default;
    friend std::strong_ordering operator<=>(const ValExp& a, const ValExp& b) noexcept {
        if (a.is_infinite() || b.is_infinite())
            return static_cast<int>(a.is_infinite()) <=> static_cast<int>(b.is_infinite());
        return *a.v_ <=> *b.v_;
    }

private:
    std::optional<std::int64_t> v_;
};

/// Element of F_q(x) in canonical form: gcd(num, den) = 1, den monic,
/// zero stored as 0/1. Canonical form is restored after every operation,
/// so equality is structural.
class RatFn {
public:
    explicit RatFn(Field field) : num_(field), den_(Poly::constant(field, 1)) {}
    explicit RatFn(Poly num);
    /// Throws Errc::DivisionByZero when den is zero.
    RatFn(Poly num, Poly den);

    static RatFn from_int(const Field& f, std::int64_t v) { return RatFn(Poly::from_int(f, v)); }
    static RatFn one(const Field& f) { return RatFn(Poly::constant(f, 1)); }
    static RatFn x(const Field& f) { return RatFn(Poly::x(f)); }

    const Field& field() const noexcept { return num_.field(); }
    const Poly& num() const noexcept { return num_; }
    const Poly& den() const noexcept { return den_; }
    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_one() const noexcept { return num_.is_one() && den_.is_one(); }
    bool is_polynomial() const noexcept { return den_.is_one(); }

    RatFn operator-() const;
    friend RatFn operator+(const RatFn& a, const RatFn& b);
    friend RatFn operator-(const RatFn& a, const RatFn& b);
    friend RatFn operator*(const RatFn& a, const RatFn& b);
    /// Throws Errc::DivisionByZero.
    friend RatFn operator/(const RatFn& a, const RatFn& b);
    RatFn& operator+=(const RatFn& o) { return *this = *this + o; }
    RatFn& operator-=(const RatFn& o) { return *this = *this - o; }
    RatFn& operator*=(const RatFn& o) { return *this = *this * o; }
    RatFn& operator/=(const RatFn& o) { return *this = *this / o; }

    RatFn inv() const;
    RatFn pow(std::int64_t e) const;
    /// r^(q^k); equals the substitution x -> x^(q^k).
    RatFn frobenius(unsigned k) const;
    /// Inverse Frobenius; throws Errc::QthRootNotExist when r is not a q-th power.
    RatFn qth_root() const;
    ValExp valuation() const;

    friend bool operator==(const RatFn& a, const RatFn& b) noexcept {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    struct Canonical {};
    RatFn(Poly num, Poly den, Canonical) : num_(std::move(num)), den_(std::move(den)) {}
    static RatFn make_monic(Poly num, Poly den);

    Poly num_;
    Poly den_;
};

inline RatFn frobenius_power(const RatFn& r, unsigned k) { return r.frobenius(k); }
inline RatFn qth_root(const RatFn& r) { return r.qth_root(); }
inline ValExp valuation(const RatFn& r) { return r.valuation(); }
ValExp valuation(const Poly& p);

}  // namespace umbra
