#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "umbra/linpoly.hpp"

namespace umbra {

/// Brackets [i] = x^(q^i) - x, factorials D_i = [i] D_{i-1}^q and
/// L_i = [i] L_{i-1} for indices up to N, built once on construction.
/// Construction verifies v(D_i) = (q^i - 1)/(q - 1) and v(L_i) = i.
class CarlitzCache {
public:
    /// Throws Errc::OrderExceeded when deg D_N would exceed kMaxDegree.
    CarlitzCache(Field field, std::size_t n);

    static constexpr std::size_t kMaxDegree = std::size_t{1} << 25;

    const Field& field() const noexcept { return field_; }
    std::size_t order() const noexcept { return n_; }
    /// q^i as an integer.
    std::size_t qpow(std::size_t i) const;

    const Poly& bracket(std::size_t i) const;
    const Poly& D(std::size_t i) const;
    const Poly& L(std::size_t i) const;

    /// D_h / D_{h-j}^(q^j) = prod_{k=h-j+1}^{h} [k]^(q^(h-k)), built from
    /// sparse bracket powers rather than by division.
    Poly factorial_ratio(std::size_t h, std::size_t j) const;
    /// L_h / L_j = prod_{k=j+1}^{h} [k].
    Poly l_ratio(std::size_t h, std::size_t j) const;

private:
    void check(std::size_t i) const;

    Field field_;
    std::size_t n_;
    std::vector<Poly> bracket_;
    std::vector<Poly> d_;
    std::vector<Poly> l_;
};

/// D_i / (D_n D_{i-n}^(q^n)); throws Errc::NotPolynomial if not exact.
Poly k_binomial(const CarlitzCache& c, std::size_t i, std::size_t n);

/// e_i(t) with coefficients (-1)^(i-j) D_i / (D_j L_{i-j}^(q^j)).
LinPoly carlitz_e(const CarlitzCache& c, std::size_t i);

/// e_i(t) as the product of (t - m) over all m in F_q[x] with deg m < i,
/// expanded directly. Limited to i <= 4 and q^i <= 256, otherwise
/// Errc::EnumerationTooLarge.
LinPoly carlitz_e_oracle(const CarlitzCache& c, std::size_t i);

/// f_i = e_i / D_i.
LinPoly carlitz_f(const CarlitzCache& c, std::size_t i);

/// C_s(z) = sum_{i <= deg s} f_i(s) z^(q^i). Throws Errc::OrderExceeded if
/// deg s > N and Errc::NotPolynomial if a coefficient is not a polynomial.
LinPoly carlitz_module(const CarlitzCache& c, const Poly& s);

/// sum_{j=0}^{h-1} (-1)^j / (L_j D_{h-j}^(q^j)) evaluated in F_q(x).
RatFn reciprocal_factorial_sum(const CarlitzCache& c, std::size_t h);

/// L_h D_h * (reciprocal_factorial_sum(h) - (-1)^(h+1) / L_h) with every term cleared of
/// denominators: term j is (L_h / L_j)(D_h / D_{h-j}^(q^j)), a product of
/// brackets. Zero exactly when the identity holds at h. `perturb_j` adds 1
/// to term j (negative control).
Poly reciprocal_factorial_residual(const CarlitzCache& c, std::size_t h,
                              std::optional<std::size_t> perturb_j = std::nullopt);

}  // namespace umbra
