#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace umbra {

namespace detail {
struct FieldData;
}

/// The Galois field F_q, q = p^nu, in polynomial basis over F_p.
///
/// Elements are handled as packed codes (`Rep`): the coordinate vector
/// (c0, ..., c_{nu-1}) of an element sum c_i g^i is stored as sum c_i p^i,
/// so the prime subfield occupies the codes 0..p-1. For nu > 1 the defining
/// modulus is the lexicographically smallest monic irreducible of degree nu,
/// coefficients compared from the constant term upward. Extension fields
/// multiply through discrete log tables built at construction.
///
/// A Field is an immutable shared handle; copies are cheap and thread-safe.
class Field {
public:
    using Rep = std::uint32_t;

    static constexpr std::uint64_t kMaxOrder = 1u << 16;

    /// Throws Errc::NotPrime or Errc::FieldTooLarge.
    static Field create(std::uint32_t p, std::uint32_t nu = 1);
    /// Builds F_q from its order; throws Errc::NotPrime if q is not a prime power.
    static Field of_order(std::uint64_t q);

    std::uint32_t p() const noexcept;
    std::uint32_t nu() const noexcept;
    std::uint32_t q() const noexcept;
    bool is_prime_field() const noexcept;
    /// Monic modulus coefficients c0..c_nu; empty for prime fields.
    const std::vector<std::uint32_t>& modulus() const noexcept;

    Rep zero() const noexcept { return 0; }
    Rep one() const noexcept { return 1; }

    Rep add(Rep a, Rep b) const noexcept {
        if (prime_) {
            Rep s = a + b;
            return s >= p_ ? s - p_ : s;
        }
        return add_ext(a, b);
    }
    Rep sub(Rep a, Rep b) const noexcept {
        if (prime_) return a >= b ? a - b : a + p_ - b;
        return sub_ext(a, b);
    }
    Rep neg(Rep a) const noexcept {
        if (prime_) return a == 0 ? 0 : p_ - a;
        return sub_ext(0, a);
    }
    Rep mul(Rep a, Rep b) const noexcept {
        if (prime_) return static_cast<Rep>((std::uint64_t{a} * b) % p_);
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    /// Throws Errc::DivisionByZero.
    Rep inv(Rep a) const;
    Rep div(Rep a, Rep b) const { return mul(a, inv(b)); }
    Rep pow(Rep a, std::uint64_t e) const noexcept;

    /// Image of an integer in the prime subfield.
    Rep from_int(std::int64_t v) const noexcept;
    /// Coordinates are reduced mod p; at most nu of them.
    Rep from_coords(std::span<const std::int64_t> coords) const;
    std::vector<std::uint32_t> coords(Rep a) const;
    /// Decimal residue for prime fields, "[c0,c1,...]" otherwise.
    std::string format(Rep a) const;

    friend bool operator==(const Field& a, const Field& b) noexcept {
        return a.p_ == b.p_ && a.nu() == b.nu();
    }

private:
    explicit Field(std::shared_ptr<const detail::FieldData> d);

    Rep add_ext(Rep a, Rep b) const noexcept;
    Rep sub_ext(Rep a, Rep b) const noexcept;

    std::shared_ptr<const detail::FieldData> d_;
    std::uint32_t p_;
    bool prime_;
    // Log tables of extension fields, owned by d_.
    const std::uint32_t* log_ = nullptr;
    const std::uint32_t* exp_ = nullptr;
    std::uint32_t order_ = 0;
};

/// A single element of F_q bound to its field.
class FqElem {
public:
    FqElem(Field field, Field::Rep code) : field_(std::move(field)), code_(code) {}

    static FqElem from_int(const Field& f, std::int64_t v) { return {f, f.from_int(v)}; }

    const Field& field() const noexcept { return field_; }
    Field::Rep code() const noexcept { return code_; }
    std::vector<std::uint32_t> coords() const { return field_.coords(code_); }
    bool is_zero() const noexcept { return code_ == 0; }

    FqElem operator+(const FqElem& o) const;
    FqElem operator-(const FqElem& o) const;
    FqElem operator-() const { return {field_, field_.neg(code_)}; }
    FqElem operator*(const FqElem& o) const;
    FqElem operator/(const FqElem& o) const;
    FqElem inv() const { return {field_, field_.inv(code_)}; }
    FqElem pow(std::uint64_t e) const { return {field_, field_.pow(code_, e)}; }

    friend bool operator==(const FqElem& a, const FqElem& b) noexcept {
        return a.field_ == b.field_ && a.code_ == b.code_;
    }

    std::string to_string() const { return field_.format(code_); }

private:
    void check_same(const FqElem& o) const;

    Field field_;
    Field::Rep code_;
};

bool is_prime(std::uint64_t n) noexcept;

}  // namespace umbra
