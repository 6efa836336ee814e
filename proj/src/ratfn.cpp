#include "umbra/ratfn.hpp"

#include "umbra/error.hpp"

namespace umbra {

RatFn::RatFn(Poly num) : num_(std::move(num)), den_(Poly::constant(num_.field(), 1)) {}

RatFn::RatFn(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw Error(Errc::DivisionByZero, "rational function with zero denominator");
    if (!(num_.field() == den_.field())) throw Error(Errc::FieldMismatch, "numerator and denominator fields differ");
    if (num_.is_zero()) {
        den_ = Poly::constant(num_.field(), 1);
        return;
    }
    if (!den_.is_one()) {
        Poly g = gcd(num_, den_);
        if (!g.is_one()) {
            num_ = exact_div(num_, g);
            den_ = exact_div(den_, g);
        }
    }
    *this = make_monic(std::move(num_), std::move(den_));
}

RatFn RatFn::make_monic(Poly num, Poly den) {
    if (num.is_zero()) return RatFn(num.field());
    if (!den.is_monic()) {
        const auto& f = den.field();
        const auto inv_lead = f.inv(den.lead());
        num = num.scale(inv_lead);
        den = den.scale(inv_lead);
    }
    return RatFn(std::move(num), std::move(den), Canonical{});
}

RatFn RatFn::operator-() const { return RatFn(-num_, den_, Canonical{}); }

RatFn operator+(const RatFn& a, const RatFn& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    // With coprime inputs, a polynomial side cannot introduce a common factor.
    if (b.den_.is_one()) return RatFn::make_monic(a.num_ + b.num_ * a.den_, a.den_);
    if (a.den_.is_one()) return RatFn::make_monic(a.num_ * b.den_ + b.num_, b.den_);
    if (a.den_ == b.den_) {
        Poly n = a.num_ + b.num_;
        if (n.is_zero()) return RatFn(a.field());
        Poly g = gcd(n, a.den_);
        if (g.is_one()) return RatFn::make_monic(std::move(n), a.den_);
        return RatFn::make_monic(exact_div(n, g), exact_div(a.den_, g));
    }
    Poly g = gcd(a.den_, b.den_);
    if (g.is_one())
        return RatFn::make_monic(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    Poly bp = exact_div(a.den_, g);
    Poly dp = exact_div(b.den_, g);
    Poly t = a.num_ * dp + b.num_ * bp;
    if (t.is_zero()) return RatFn(a.field());
    Poly g2 = gcd(t, g);
    if (g2.is_one()) return RatFn::make_monic(std::move(t), bp * b.den_);
    return RatFn::make_monic(exact_div(t, g2), bp * exact_div(b.den_, g2));
}

RatFn operator-(const RatFn& a, const RatFn& b) { return a + (-b); }

RatFn operator*(const RatFn& a, const RatFn& b) {
    if (a.is_zero() || b.is_zero()) return RatFn(a.field());
    if (a.den_.is_one() && b.den_.is_one()) return RatFn(a.num_ * b.num_, a.den_, RatFn::Canonical{});
    Poly an = a.num_;
    Poly bd = b.den_;
    if (!bd.is_one()) {
        Poly g1 = gcd(an, bd);
        if (!g1.is_one()) {
            an = exact_div(an, g1);
            bd = exact_div(bd, g1);
        }
    }
    Poly bn = b.num_;
    Poly ad = a.den_;
    if (!ad.is_one()) {
        Poly g2 = gcd(bn, ad);
        if (!g2.is_one()) {
            bn = exact_div(bn, g2);
            ad = exact_div(ad, g2);
        }
    }
    return RatFn::make_monic(an * bn, ad * bd);
}

RatFn RatFn::inv() const {
    if (is_zero()) throw Error(Errc::DivisionByZero, "inverse of zero rational function");
    return make_monic(den_, num_);
}

RatFn operator/(const RatFn& a, const RatFn& b) { return a * b.inv(); }

RatFn RatFn::pow(std::int64_t e) const {
    if (e < 0) return inv().pow(-e);
    return RatFn(umbra::pow(num_, static_cast<std::uint64_t>(e)), umbra::pow(den_, static_cast<std::uint64_t>(e)),
                 Canonical{});
}

RatFn RatFn::frobenius(unsigned k) const {
    // x -> x^(q^k) is an injective ring map, so coprimality and monicity survive.
    return RatFn(num_.frobenius(k), den_.frobenius(k), Canonical{});
}

RatFn RatFn::qth_root() const {
    auto n = num_.qth_root();
    auto d = den_.qth_root();
    if (!n || !d) throw Error(Errc::QthRootNotExist, "rational function is not a q-th power in F_q(x)");
    return RatFn(std::move(*n), std::move(*d), Canonical{});
}

ValExp valuation(const Poly& p) {
    auto o = p.ord();
    if (!o) return ValExp::infinity();
    return ValExp(static_cast<std::int64_t>(*o));
}

ValExp RatFn::valuation() const {
    if (is_zero()) return ValExp::infinity();
    return ValExp(static_cast<std::int64_t>(*num_.ord()) - static_cast<std::int64_t>(*den_.ord()));
}

}  // namespace umbra
