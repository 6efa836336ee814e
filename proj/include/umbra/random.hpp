#pragma once

// Seeded generators for randomized checks. Values are drawn straight from
// the engine (no std::uniform_*_distribution) so every platform sees the
// same sequence for a given seed.

#include <cstdint>
#include <random>
#include <vector>

#include "umbra/linpoly.hpp"

namespace umbra {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t below(std::uint64_t n) { return eng_() % n; }

    Field::Rep element(const Field& f) { return static_cast<Field::Rep>(below(f.q())); }
    Field::Rep nonzero(const Field& f) { return static_cast<Field::Rep>(1 + below(f.q() - 1)); }

    Poly poly(const Field& f, std::size_t max_deg) {
        std::vector<Field::Rep> c(below(max_deg + 1) + 1);
        for (auto& v : c) v = element(f);
        return Poly(f, std::move(c));
    }

    Poly nonzero_poly(const Field& f, std::size_t max_deg) {
        Poly p = poly(f, max_deg);
        while (p.is_zero()) p = poly(f, max_deg);
        return p;
    }

    RatFn ratfn(const Field& f, std::size_t max_deg) { return RatFn(poly(f, max_deg), nonzero_poly(f, max_deg)); }

    RatFn nonzero_ratfn(const Field& f, std::size_t max_deg) {
        return RatFn(nonzero_poly(f, max_deg), nonzero_poly(f, max_deg));
    }

    /// Rational function whose denominator is x^k times a unit of F_q[[x]],
    /// k <= max_pole, so valuations range over [-max_pole, max_deg].
    RatFn scalar(const Field& f, std::size_t max_deg, std::size_t max_pole) {
        Poly den = nonzero_poly(f, 2);
        while (den.coeff(0) == 0) den = nonzero_poly(f, 2);
        return RatFn(poly(f, max_deg), den.shift_up(below(max_pole + 1)));
    }

    /// F_q-linear polynomial with exactly max_level + 1 levels (top
    /// coefficient nonzero) and coefficients from scalar().
    LinPoly linpoly(const Field& f, std::size_t max_level, std::size_t max_deg, std::size_t max_pole) {
        std::vector<RatFn> c;
        for (std::size_t j = 0; j <= max_level; ++j) c.push_back(scalar(f, max_deg, max_pole));
        while (c.back().is_zero()) c.back() = scalar(f, max_deg, max_pole);
        return LinPoly(f, std::move(c));
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace umbra
