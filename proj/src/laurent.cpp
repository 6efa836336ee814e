#include "umbra/laurent.hpp"

#include <algorithm>
#include <limits>

#include "umbra/error.hpp"
#include "umbra/genfun.hpp"

namespace umbra {

namespace {

constexpr std::int64_t kMaxStored = std::int64_t{1} << 28;
constexpr std::int64_t kSaturate = std::int64_t{1} << 60;

std::int64_t sat_mul(std::int64_t a, std::int64_t b) {
    if (a == 0 || b == 0) return 0;
    const __int128 r = static_cast<__int128>(a) * b;
    if (r > kSaturate) return kSaturate;
    if (r < -kSaturate) return -kSaturate;
    return static_cast<std::int64_t>(r);
}

std::int64_t q_power(const Field& f, unsigned k) {
    std::int64_t r = 1;
    for (unsigned i = 0; i < k; ++i) r = sat_mul(r, f.q());
    return r;
}

void check_count(std::int64_t n) {
    if (n > kMaxStored) throw Error(Errc::OrderExceeded, "Laurent series needs too many coefficients");
}

// Inverse of a unit power series (c[0] != 0) modulo x^n.
Poly unit_inverse(const Poly& a, std::size_t n) {
    const Field& f = a.field();
    Poly g = Poly::constant(f, f.inv(a.coeff(0)));
    std::size_t k = 1;
    while (k < n) {
        k = std::min(2 * k, n);
        Poly e = (a.truncate(k) * g).truncate(k);
        g = (g * (Poly::from_int(f, 2) - e)).truncate(k);
    }
    return g;
}

}  // namespace

LaurentSeries::LaurentSeries(Field field, std::int64_t prec) : field_(std::move(field)), prec_(prec) {}

LaurentSeries::LaurentSeries(Field field, std::int64_t lead, std::vector<Field::Rep> coeffs, std::int64_t prec)
    : field_(std::move(field)), lead_(lead), c_(std::move(coeffs)), prec_(prec) {
    normalize();
}

void LaurentSeries::normalize() {
    if (prec_ <= lead_) {
        c_.clear();
    } else if (static_cast<std::int64_t>(c_.size()) > prec_ - lead_) {
        c_.resize(static_cast<std::size_t>(prec_ - lead_));
    }
    std::size_t first = 0;
    while (first < c_.size() && c_[first] == 0) ++first;
    if (first == c_.size()) {
        c_.clear();
        lead_ = 0;
        return;
    }
    if (first > 0) {
        c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(first));
        lead_ += static_cast<std::int64_t>(first);
    }
    while (c_.back() == 0) c_.pop_back();
}

LaurentSeries LaurentSeries::from_poly(const Poly& p, std::int64_t prec) {
    const Field& f = p.field();
    if (p.is_zero() || prec <= 0) return LaurentSeries(f, prec);
    const auto c = p.coeffs();
    const std::size_t n = std::min<std::size_t>(c.size(), static_cast<std::size_t>(prec));
    return LaurentSeries(f, 0, std::vector<Field::Rep>(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(n)), prec);
}

LaurentSeries LaurentSeries::from_ratfn(const RatFn& r, std::int64_t prec) {
    const Field& f = r.field();
    if (r.is_zero()) return LaurentSeries(f, prec);
    if (r.is_polynomial()) return from_poly(r.num(), prec);
    const std::size_t a = *r.num().ord();
    const std::size_t b = *r.den().ord();
    const std::int64_t lead = static_cast<std::int64_t>(a) - static_cast<std::int64_t>(b);
    const std::int64_t count = prec - lead;
    if (count <= 0) return LaurentSeries(f, prec);
    check_count(count);
    const auto n = static_cast<std::size_t>(count);
    const Poly num = r.num().shift_down(a).truncate(n);
    const Poly den = r.den().shift_down(b);
    const Poly s = (num * unit_inverse(den, n)).truncate(n);
    const auto sc = s.coeffs();
    return LaurentSeries(f, lead, std::vector<Field::Rep>(sc.begin(), sc.end()), prec);
}

std::optional<std::int64_t> LaurentSeries::valuation() const noexcept {
    if (c_.empty()) return std::nullopt;
    return lead_;
}

Field::Rep LaurentSeries::coeff(std::int64_t e) const {
    if (e >= prec_) throw Error(Errc::InvalidArgument, "coefficient beyond the known precision");
    if (c_.empty() || e < lead_ || e - lead_ >= static_cast<std::int64_t>(c_.size())) return 0;
    return c_[static_cast<std::size_t>(e - lead_)];
}

LaurentSeries LaurentSeries::truncate(std::int64_t p) const {
    if (p >= prec_) return *this;
    return LaurentSeries(field_, lead_, c_, p);
}

LaurentSeries LaurentSeries::operator-() const {
    LaurentSeries out(*this);
    for (auto& v : out.c_) v = field_.neg(v);
    return out;
}

LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
    if (!(a.field_ == b.field_)) throw Error(Errc::FieldMismatch, "Laurent series over different fields");
    const std::int64_t prec = std::min(a.prec_, b.prec_);
    if (a.is_zero()) return b.truncate(prec);
    if (b.is_zero()) return a.truncate(prec);
    const std::int64_t lead = std::min(a.lead_, b.lead_);
    if (lead >= prec) return LaurentSeries(a.field_, prec);
    const std::int64_t top =
        std::min(prec, std::max(a.lead_ + static_cast<std::int64_t>(a.c_.size()),
                                b.lead_ + static_cast<std::int64_t>(b.c_.size())));
    std::vector<Field::Rep> c(static_cast<std::size_t>(top - lead), 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        const std::int64_t e = a.lead_ + static_cast<std::int64_t>(i);
        if (e >= top) break;
        c[static_cast<std::size_t>(e - lead)] = a.c_[i];
    }
    for (std::size_t i = 0; i < b.c_.size(); ++i) {
        const std::int64_t e = b.lead_ + static_cast<std::int64_t>(i);
        if (e >= top) break;
        auto& slot = c[static_cast<std::size_t>(e - lead)];
        slot = a.field_.add(slot, b.c_[i]);
    }
    return LaurentSeries(a.field_, lead, std::move(c), prec);
}

LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a + (-b); }

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    if (!(a.field_ == b.field_)) throw Error(Errc::FieldMismatch, "Laurent series over different fields");
    const std::int64_t va = a.valuation_floor();
    const std::int64_t vb = b.valuation_floor();
    const std::int64_t prec = std::min(a.prec_ + vb, b.prec_ + va);
    if (a.is_zero() || b.is_zero()) return LaurentSeries(a.field_, prec);
    const std::int64_t lead = va + vb;
    const std::int64_t count = prec - lead;
    if (count <= 0) return LaurentSeries(a.field_, prec);
    const auto n = static_cast<std::size_t>(count);
    const Poly pa(a.field_, std::vector<Field::Rep>(a.c_.begin(), a.c_.begin() + std::min(a.c_.size(), n)));
    const Poly pb(a.field_, std::vector<Field::Rep>(b.c_.begin(), b.c_.begin() + std::min(b.c_.size(), n)));
    const auto pc = (pa * pb).truncate(n);
    const auto cc = pc.coeffs();
    return LaurentSeries(a.field_, lead, std::vector<Field::Rep>(cc.begin(), cc.end()), prec);
}

LaurentSeries LaurentSeries::inv() const {
    if (c_.empty()) throw Error(Errc::ZeroToPrecision, "inverse of a value that is zero to precision");
    const std::int64_t rel = prec_ - lead_;
    const auto n = static_cast<std::size_t>(rel);
    const Poly g = unit_inverse(Poly(field_, c_), n);
    const auto gc = g.coeffs();
    return LaurentSeries(field_, -lead_, std::vector<Field::Rep>(gc.begin(), gc.end()), -lead_ + rel);
}

LaurentSeries LaurentSeries::frobenius(unsigned k, std::optional<std::int64_t> cap) const {
    const std::int64_t step = q_power(field_, k);
    std::int64_t prec = sat_mul(prec_, step);
    if (cap) prec = std::min(prec, *cap);
    if (c_.empty()) return LaurentSeries(field_, prec);
    const std::int64_t lead = sat_mul(lead_, step);
    if (lead >= prec) return LaurentSeries(field_, prec);
    const std::int64_t count = std::min(prec - lead, sat_mul(static_cast<std::int64_t>(c_.size()) - 1, step) + 1);
    check_count(count);
    // Coefficients lie in F_q, so a^(q^k) = a and only exponents move.
    std::vector<Field::Rep> c(static_cast<std::size_t>(count), 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        const std::int64_t pos = sat_mul(static_cast<std::int64_t>(i), step);
        if (pos >= count) break;
        c[static_cast<std::size_t>(pos)] = c_[i];
    }
    return LaurentSeries(field_, lead, std::move(c), prec);
}

std::optional<std::int64_t> LaurentSeries::first_difference(const LaurentSeries& o) const {
    const LaurentSeries d = truncate(o.prec_) - o.truncate(prec_);
    return d.valuation();
}

bool LaurentSeries::agrees_with(const LaurentSeries& o) const { return !first_difference(o).has_value(); }

std::string LaurentSeries::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        const std::int64_t e = lead_ + static_cast<std::int64_t>(i);
        if (!out.empty()) out += '+';
        if (e == 0) {
            out += field_.format(c_[i]);
            continue;
        }
        if (c_[i] != 1) {
            out += field_.format(c_[i]);
            out += '*';
        }
        out += 'x';
        if (e != 1) out += '^' + std::to_string(e);
    }
    if (!out.empty()) out += '+';
    out += "O(x^" + std::to_string(prec_) + ")";
    return out;
}

LaurentSeries eval_lin_series(const std::vector<RatFn>& b, const LaurentSeries& lam, std::int64_t prec) {
    const Field& f = lam.field();
    const std::int64_t vl = lam.valuation_floor();
    LaurentSeries sum(f, prec);
    std::optional<std::int64_t> first;
    int beyond = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
        const auto k = static_cast<unsigned>(j);
        if (b[j].is_zero()) {
            if (++beyond == 3) return sum;
            continue;
        }
        const std::int64_t vb = b[j].valuation().value();
        const std::int64_t tv = vb + sat_mul(q_power(f, k), vl);
        if (first && tv <= *first)
            throw Error(Errc::DivergentAtPoint,
                        "term " + std::to_string(j) + " is not smaller than the leading term", j);
        if (!first) first = tv;
        if (tv > prec) {
            if (++beyond == 3) return sum;
            continue;
        }
        beyond = 0;
        const LaurentSeries bj = LaurentSeries::from_ratfn(b[j], prec - sat_mul(q_power(f, k), vl));
        sum = sum + bj * lam.frobenius(k, prec - vb);
    }
    throw Error(Errc::OrderExceeded, "series needs more than " + std::to_string(b.size()) + " terms at this point");
}

LaurentSeries eval_lin_poly(const std::vector<RatFn>& a, const LaurentSeries& z, std::int64_t prec) {
    const Field& f = z.field();
    const std::int64_t vz = z.valuation_floor();
    LaurentSeries sum(f, prec);
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j].is_zero()) continue;
        const auto k = static_cast<unsigned>(j);
        const std::int64_t vj = a[j].valuation().value();
        const LaurentSeries aj = LaurentSeries::from_ratfn(a[j], prec - sat_mul(q_power(f, k), vz));
        sum = sum + aj * z.frobenius(k, prec - vj);
    }
    return sum;
}

PointExpansionReport point_expansion_check(const DeltaOperator& op, const BasicSequence& seq,
                                           const LaurentSeries& lam, const RatFn& t, std::int64_t prec) {
    const Field& f = op.field();
    const auto v_t = t.valuation();
    if (!v_t.is_infinite() && v_t.value() < 0)
        throw Error(Errc::InvalidArgument, "the point t must have non-negative valuation");
    const std::vector<RatFn> b = exp_series(op, op.order()).coeffs();

    const LaurentSeries lt = lam * LaurentSeries::from_ratfn(t, prec - lam.valuation_floor());
    PointExpansionReport report{false, eval_lin_series(b, lt, prec), LaurentSeries(f, prec), std::nullopt, 0};

    const LaurentSeries e = eval_lin_series(b, lam, prec);
    const std::int64_t ve = e.valuation_floor();
    if (ve <= 0) throw Error(Errc::DivergentAtPoint, "e_delta(lam) is not in the maximal ideal");
    LaurentSeries sum(f, prec);
    int beyond = 0;
    bool done = false;
    for (std::size_t n = 0; n <= seq.order(); ++n) {
        report.terms = n + 1;
        const RatFn qt = lin_eval(seq.Q(n), t);
        const auto k = static_cast<unsigned>(n);
        const std::int64_t step = q_power(f, k);
        if (qt.is_zero() || qt.valuation().value() + sat_mul(step, ve) > prec) {
            if (++beyond == 3) {
                done = true;
                break;
            }
            continue;
        }
        beyond = 0;
        const std::int64_t vq = qt.valuation().value();
        sum = sum + LaurentSeries::from_ratfn(qt, prec - sat_mul(step, ve)) * e.frobenius(k, prec - vq);
    }
    if (!done)
        throw Error(Errc::OrderExceeded, "basic sequence of order " + std::to_string(seq.order()) +
                                             " is too short for precision " + std::to_string(prec));
    report.rhs = sum;
    report.first_difference = report.lhs.first_difference(report.rhs);
    report.ok = !report.first_difference && report.lhs.precision() >= prec && report.rhs.precision() >= prec;
    return report;
}

}  // namespace umbra
