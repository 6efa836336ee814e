#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "umbra/ratfn.hpp"

namespace umbra {

/// F_q-linear polynomial u(t) = sum_j a_j t^(q^j) with a_j in F_q(x).
///
/// Coefficients are indexed by Frobenius level j, never by the raw exponent,
/// so tau is a shift and no code depends on q directly. No trailing zeros.
class LinPoly {
public:
    explicit LinPoly(Field field) : field_(std::move(field)) {}
    LinPoly(Field field, std::vector<RatFn> coeffs);

    /// u(t) = t.
    static LinPoly identity(const Field& f);
    /// c * t^(q^j).
    static LinPoly monomial(const RatFn& c, std::size_t j);

    const Field& field() const noexcept { return field_; }
    const std::vector<RatFn>& coeffs() const noexcept { return a_; }
    /// Number of stored levels (top level + 1); zero for the zero polynomial.
    std::size_t size() const noexcept { return a_.size(); }
    bool is_zero() const noexcept { return a_.empty(); }
    /// Top Frobenius level n (deg u = q^n); nullopt for zero.
    std::optional<std::size_t> level() const noexcept;
    RatFn coeff(std::size_t j) const { return j < a_.size() ? a_[j] : RatFn(field_); }
    void set(std::size_t j, RatFn c);

    LinPoly operator-() const;
    LinPoly& operator+=(const LinPoly& o);
    LinPoly& operator-=(const LinPoly& o);
    friend LinPoly operator+(LinPoly a, const LinPoly& b) { return a += b; }
    friend LinPoly operator-(LinPoly a, const LinPoly& b) { return a -= b; }
    /// Scalar multiple c * u(t).
    LinPoly scale(const RatFn& c) const;
    /// Keeps levels 0..max_level.
    LinPoly truncate(std::size_t max_level) const;

    friend bool operator==(const LinPoly& a, const LinPoly& b) noexcept {
        return a.field_ == b.field_ && a.a_ == b.a_;
    }

private:
    void trim();

    Field field_;
    std::vector<RatFn> a_;
};

/// (u o v)(t) = u(v(t)); level m gets sum_{j+k=m} a_j b_k^(q^j).
LinPoly lin_compose(const LinPoly& u, const LinPoly& v);
/// Same, discarding levels above max_level before they are formed.
LinPoly lin_compose(const LinPoly& u, const LinPoly& v, std::size_t max_level);
/// Multiplicative shift (rho_lam u)(t) = u(lam t).
LinPoly rho(const LinPoly& u, const RatFn& lam);
/// tau^k. For k < 0 throws Errc::ConstantTermObstruction if a low level is
/// occupied and Errc::QthRootNotExist if a coefficient is not a q^|k|-th power.
LinPoly tau_power(const LinPoly& u, int k);
/// u(r) = sum_j a_j r^(q^j).
RatFn lin_eval(const LinPoly& u, const RatFn& r);

/// Two-variable F_q-bilinear form sum c_{j,k} s^(q^j) t^(q^k); row j is the
/// s-level, column k the t-level. Stored zero-trimmed.
class BiLinPoly {
public:
    explicit BiLinPoly(Field field) : field_(std::move(field)) {}

    const Field& field() const noexcept { return field_; }
    std::size_t rows() const noexcept { return c_.size(); }
    std::size_t cols() const noexcept;
    RatFn at(std::size_t j, std::size_t k) const;
    void add(std::size_t j, std::size_t k, const RatFn& v);
    bool is_zero() const noexcept { return c_.empty(); }

    friend bool operator==(const BiLinPoly& a, const BiLinPoly& b);

private:
    void trim();

    Field field_;
    std::vector<std::vector<RatFn>> c_;
};

/// First entry (row, col) in row-major order where a and b differ.
std::optional<std::pair<std::size_t, std::size_t>> first_difference(const BiLinPoly& a, const BiLinPoly& b);

/// u(st) as a bilinear form: c_{j,j} = a_j.
BiLinPoly subst_st(const LinPoly& u);

struct BiLinTerm {
    RatFn coeff;
    LinPoly in_t;
    LinPoly in_s;
    unsigned frob = 0;
};

/// sum coeff * in_t(t) * in_s(s)^(q^frob).
BiLinPoly bilin_accumulate(const std::vector<BiLinTerm>& terms);
void bilin_accumulate_into(BiLinPoly& out, const BiLinTerm& term);

}  // namespace umbra
