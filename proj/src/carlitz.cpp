#include "umbra/carlitz.hpp"

#include <stdexcept>
#include <string>

#include "umbra/error.hpp"

namespace umbra {

CarlitzCache::CarlitzCache(Field field, std::size_t n) : field_(std::move(field)), n_(n) {
    const std::size_t q = field_.q();
    std::size_t qi = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        if (qi > kMaxDegree / q || i * qi * q > kMaxDegree)
            throw Error(Errc::OrderExceeded, "Carlitz tables of order " + std::to_string(n) + " are too large for q = " +
                                                 std::to_string(q));
        qi *= q;
    }

    bracket_.push_back(Poly(field_));  // unused slot 0
    d_.push_back(Poly::constant(field_, 1));
    l_.push_back(Poly::constant(field_, 1));
    for (std::size_t i = 1; i <= n; ++i) {
        bracket_.push_back(Poly::binomial(field_, qpow(i), 1));
        d_.push_back(bracket_[i] * d_[i - 1].frobenius(1));
        l_.push_back(bracket_[i] * l_[i - 1]);
        check(i);
    }
}

void CarlitzCache::check(std::size_t i) const {
    const std::size_t q = field_.q();
    const auto vd = static_cast<std::int64_t>((qpow(i) - 1) / (q - 1));
    if (valuation(d_[i]) != ValExp(vd) || valuation(l_[i]) != ValExp(static_cast<std::int64_t>(i)))
        throw std::logic_error("Carlitz factorial valuation check failed at i = " + std::to_string(i));
}

std::size_t CarlitzCache::qpow(std::size_t i) const {
    std::size_t r = 1;
    for (std::size_t k = 0; k < i; ++k) r *= field_.q();
    return r;
}

const Poly& CarlitzCache::bracket(std::size_t i) const {
    if (i == 0 || i > n_) throw Error(Errc::OrderExceeded, "bracket index " + std::to_string(i) + " outside cache");
    return bracket_[i];
}

const Poly& CarlitzCache::D(std::size_t i) const {
    if (i > n_) throw Error(Errc::OrderExceeded, "D index " + std::to_string(i) + " outside cache");
    return d_[i];
}

const Poly& CarlitzCache::L(std::size_t i) const {
    if (i > n_) throw Error(Errc::OrderExceeded, "L index " + std::to_string(i) + " outside cache");
    return l_[i];
}

Poly CarlitzCache::factorial_ratio(std::size_t h, std::size_t j) const {
    if (j > h || h > n_) throw Error(Errc::OrderExceeded, "factorial ratio index outside cache");
    Poly r = Poly::constant(field_, 1);
    for (std::size_t k = h - j + 1; k <= h; ++k)
        r = r * Poly::binomial(field_, qpow(k) * qpow(h - k), qpow(h - k));
    return r;
}

Poly CarlitzCache::l_ratio(std::size_t h, std::size_t j) const {
    if (j > h || h > n_) throw Error(Errc::OrderExceeded, "L ratio index outside cache");
    Poly r = Poly::constant(field_, 1);
    for (std::size_t k = j + 1; k <= h; ++k) r = r * bracket_[k];
    return r;
}

Poly k_binomial(const CarlitzCache& c, std::size_t i, std::size_t n) {
    if (n > i || i > c.order()) throw Error(Errc::OrderExceeded, "binomial index outside cache");
    return exact_div(c.D(i), c.D(n) * c.D(i - n).frobenius(static_cast<unsigned>(n)));
}

LinPoly carlitz_e(const CarlitzCache& c, std::size_t i) {
    const Field& f = c.field();
    std::vector<RatFn> coeffs;
    for (std::size_t j = 0; j <= i; ++j) {
        Poly v = exact_div(c.D(i), c.D(j) * c.L(i - j).frobenius(static_cast<unsigned>(j)));
        if ((i - j) % 2 == 1) v = -v;
        coeffs.emplace_back(std::move(v));
    }
    return LinPoly(f, std::move(coeffs));
}

LinPoly carlitz_e_oracle(const CarlitzCache& c, std::size_t i) {
    const Field& f = c.field();
    const std::size_t count = i <= 4 ? c.qpow(i) : 0;
    if (i > 4 || count > 256)
        throw Error(Errc::EnumerationTooLarge, "product over q^" + std::to_string(i) + " polynomials is too large");

    // prod[k] is the coefficient of t^k; multiply by (t - m) for each m.
    std::vector<Poly> prod{Poly::constant(f, 1)};
    std::vector<Poly::Rep> digits(i, 0);
    for (std::size_t idx = 0; idx < count; ++idx) {
        const Poly m(f, digits);
        std::vector<Poly> next(prod.size() + 1, Poly(f));
        for (std::size_t k = 0; k < prod.size(); ++k) {
            next[k + 1] += prod[k];
            if (!m.is_zero()) next[k] -= m * prod[k];
        }
        prod = std::move(next);
        // Lexicographic successor, last digit fastest.
        for (std::size_t d = i; d-- > 0;) {
            if (++digits[d] < f.q()) break;
            digits[d] = 0;
        }
    }

    std::vector<RatFn> coeffs;
    std::size_t next_power = 1;
    for (std::size_t k = 0; k < prod.size(); ++k) {
        if (k == next_power) {
            coeffs.emplace_back(prod[k]);
            next_power *= f.q();
        } else if (!prod[k].is_zero()) {
            throw std::logic_error("product of (t - m) has a non-linear term t^" + std::to_string(k));
        }
    }
    return LinPoly(f, std::move(coeffs));
}

LinPoly carlitz_f(const CarlitzCache& c, std::size_t i) {
    return carlitz_e(c, i).scale(RatFn(Poly::constant(c.field(), 1), c.D(i)));
}

LinPoly carlitz_module(const CarlitzCache& c, const Poly& s) {
    const Field& f = c.field();
    if (s.is_zero()) return LinPoly(f);
    const std::size_t deg = *s.degree();
    if (deg > c.order()) throw Error(Errc::OrderExceeded, "deg s exceeds the Carlitz cache order");
    const RatFn sr(s);
    std::vector<RatFn> coeffs;
    for (std::size_t i = 0; i <= deg; ++i) {
        RatFn v = lin_eval(carlitz_f(c, i), sr);
        if (!v.is_polynomial()) throw Error(Errc::NotPolynomial, "f_" + std::to_string(i) + "(s) is not a polynomial");
        coeffs.push_back(std::move(v));
    }
    return LinPoly(f, std::move(coeffs));
}

RatFn reciprocal_factorial_sum(const CarlitzCache& c, std::size_t h) {
    const Field& f = c.field();
    RatFn sum(f);
    for (std::size_t j = 0; j < h; ++j) {
        const RatFn term(Poly::constant(f, 1), c.L(j) * c.D(h - j).frobenius(static_cast<unsigned>(j)));
        sum += j % 2 == 0 ? term : -term;
    }
    return sum;
}

Poly reciprocal_factorial_residual(const CarlitzCache& c, std::size_t h, std::optional<std::size_t> perturb_j) {
    const Field& f = c.field();
    Poly sum(f);
    for (std::size_t j = 0; j < h; ++j) {
        Poly term = c.l_ratio(h, j) * c.factorial_ratio(h, j);
        if (perturb_j && *perturb_j == j) term += Poly::constant(f, 1);
        sum += j % 2 == 0 ? term : -term;
    }
    // Right-hand side (-1)^(h+1) / L_h, times L_h D_h.
    sum -= (h + 1) % 2 == 0 ? c.D(h) : -c.D(h);
    return sum;
}

}  // namespace umbra
