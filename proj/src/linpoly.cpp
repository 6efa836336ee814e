#include "umbra/linpoly.hpp"

#include <algorithm>

#include "umbra/error.hpp"

namespace umbra {

LinPoly::LinPoly(Field field, std::vector<RatFn> coeffs) : field_(std::move(field)), a_(std::move(coeffs)) {
    for (const RatFn& c : a_)
        if (!(c.field() == field_)) throw Error(Errc::FieldMismatch, "LinPoly coefficient over another field");
    trim();
}

LinPoly LinPoly::identity(const Field& f) { return monomial(RatFn::one(f), 0); }

LinPoly LinPoly::monomial(const RatFn& c, std::size_t j) {
    LinPoly u(c.field());
    u.set(j, c);
    return u;
}

std::optional<std::size_t> LinPoly::level() const noexcept {
    if (a_.empty()) return std::nullopt;
    return a_.size() - 1;
}

void LinPoly::set(std::size_t j, RatFn c) {
    if (j >= a_.size()) {
        if (c.is_zero()) return;
        a_.resize(j + 1, RatFn(field_));
    }
    a_[j] = std::move(c);
    trim();
}

void LinPoly::trim() {
    while (!a_.empty() && a_.back().is_zero()) a_.pop_back();
}

LinPoly LinPoly::operator-() const {
    LinPoly r(*this);
    for (RatFn& c : r.a_) c = -c;
    return r;
}

LinPoly& LinPoly::operator+=(const LinPoly& o) {
    if (a_.size() < o.a_.size()) a_.resize(o.a_.size(), RatFn(field_));
    for (std::size_t j = 0; j < o.a_.size(); ++j)
        if (!o.a_[j].is_zero()) a_[j] += o.a_[j];
    trim();
    return *this;
}

LinPoly& LinPoly::operator-=(const LinPoly& o) {
    if (a_.size() < o.a_.size()) a_.resize(o.a_.size(), RatFn(field_));
    for (std::size_t j = 0; j < o.a_.size(); ++j)
        if (!o.a_[j].is_zero()) a_[j] -= o.a_[j];
    trim();
    return *this;
}

LinPoly LinPoly::scale(const RatFn& c) const {
    if (c.is_zero()) return LinPoly(field_);
    LinPoly r(*this);
    for (RatFn& v : r.a_)
        if (!v.is_zero()) v *= c;
    return r;
}

LinPoly LinPoly::truncate(std::size_t max_level) const {
    if (a_.size() <= max_level + 1) return *this;
    return LinPoly(field_, std::vector<RatFn>(a_.begin(), a_.begin() + static_cast<std::ptrdiff_t>(max_level + 1)));
}

LinPoly lin_compose(const LinPoly& u, const LinPoly& v, std::size_t max_level) {
    LinPoly r(u.field());
    if (u.is_zero() || v.is_zero()) return r;
    const std::size_t top = std::min(max_level, (u.size() - 1) + (v.size() - 1));
    std::vector<RatFn> out(top + 1, RatFn(u.field()));
    for (std::size_t j = 0; j < u.size() && j <= top; ++j) {
        const RatFn& a = u.coeffs()[j];
        if (a.is_zero()) continue;
        for (std::size_t k = 0; k < v.size() && j + k <= top; ++k) {
            const RatFn& b = v.coeffs()[k];
            if (b.is_zero()) continue;
            out[j + k] += a * b.frobenius(static_cast<unsigned>(j));
        }
    }
    return LinPoly(u.field(), std::move(out));
}

LinPoly lin_compose(const LinPoly& u, const LinPoly& v) {
    return lin_compose(u, v, static_cast<std::size_t>(-1) / 2);
}

LinPoly rho(const LinPoly& u, const RatFn& lam) {
    std::vector<RatFn> out(u.coeffs().begin(), u.coeffs().end());
    RatFn power = lam;  // lam^(q^j)
    for (std::size_t j = 0; j < out.size(); ++j) {
        if (j > 0) power = power.frobenius(1);
        if (!out[j].is_zero()) out[j] *= power;
    }
    return LinPoly(u.field(), std::move(out));
}

LinPoly tau_power(const LinPoly& u, int k) {
    if (k == 0 || u.is_zero()) return u;
    std::vector<RatFn> out;
    if (k > 0) {
        const auto shift = static_cast<std::size_t>(k);
        out.assign(u.size() + shift, RatFn(u.field()));
        for (std::size_t j = 0; j < u.size(); ++j) out[j + shift] = u.coeffs()[j].frobenius(static_cast<unsigned>(k));
        return LinPoly(u.field(), std::move(out));
    }
    const auto shift = static_cast<std::size_t>(-k);
    for (std::size_t j = 0; j < std::min(shift, u.size()); ++j)
        if (!u.coeffs()[j].is_zero())
            throw Error(Errc::ConstantTermObstruction, "level " + std::to_string(j) + " is occupied", j);
    for (std::size_t j = shift; j < u.size(); ++j) {
        RatFn c = u.coeffs()[j];
        for (std::size_t i = 0; i < shift; ++i) {
            try {
                c = c.qth_root();
            } catch (const Error&) {
                throw Error(Errc::QthRootNotExist, "coefficient at level " + std::to_string(j) + " is not a q-th power", j);
            }
        }
        out.push_back(std::move(c));
    }
    return LinPoly(u.field(), std::move(out));
}

RatFn lin_eval(const LinPoly& u, const RatFn& r) {
    RatFn sum(u.field());
    if (r.is_zero()) return sum;
    RatFn power = r;
    for (std::size_t j = 0; j < u.size(); ++j) {
        if (j > 0) power = power.frobenius(1);
        if (!u.coeffs()[j].is_zero()) sum += u.coeffs()[j] * power;
    }
    return sum;
}

std::size_t BiLinPoly::cols() const noexcept {
    std::size_t n = 0;
    for (const auto& row : c_) n = std::max(n, row.size());
    return n;
}

RatFn BiLinPoly::at(std::size_t j, std::size_t k) const {
    if (j < c_.size() && k < c_[j].size()) return c_[j][k];
    return RatFn(field_);
}

void BiLinPoly::add(std::size_t j, std::size_t k, const RatFn& v) {
    if (v.is_zero()) return;
    if (j >= c_.size()) c_.resize(j + 1);
    auto& row = c_[j];
    if (k >= row.size()) row.resize(k + 1, RatFn(field_));
    row[k] += v;
    if (row[k].is_zero()) trim();
}

void BiLinPoly::trim() {
    for (auto& row : c_)
        while (!row.empty() && row.back().is_zero()) row.pop_back();
    while (!c_.empty() && c_.back().empty()) c_.pop_back();
}

bool operator==(const BiLinPoly& a, const BiLinPoly& b) {
    return a.field_ == b.field_ && !first_difference(a, b).has_value();
}

std::optional<std::pair<std::size_t, std::size_t>> first_difference(const BiLinPoly& a, const BiLinPoly& b) {
    const std::size_t rows = std::max(a.rows(), b.rows());
    const std::size_t cols = std::max(a.cols(), b.cols());
    for (std::size_t j = 0; j < rows; ++j)
        for (std::size_t k = 0; k < cols; ++k)
            if (!(a.at(j, k) == b.at(j, k))) return std::make_pair(j, k);
    return std::nullopt;
}

BiLinPoly subst_st(const LinPoly& u) {
    BiLinPoly out(u.field());
    for (std::size_t j = 0; j < u.size(); ++j) out.add(j, j, u.coeffs()[j]);
    return out;
}

void bilin_accumulate_into(BiLinPoly& out, const BiLinTerm& term) {
    if (term.coeff.is_zero()) return;
    for (std::size_t k = 0; k < term.in_s.size(); ++k) {
        const RatFn& b = term.in_s.coeffs()[k];
        if (b.is_zero()) continue;
        const RatFn bs = term.coeff * b.frobenius(term.frob);
        for (std::size_t m = 0; m < term.in_t.size(); ++m) {
            const RatFn& a = term.in_t.coeffs()[m];
            if (!a.is_zero()) out.add(k + term.frob, m, bs * a);
        }
    }
}

BiLinPoly bilin_accumulate(const std::vector<BiLinTerm>& terms) {
    if (terms.empty()) throw Error(Errc::InvalidArgument, "bilin_accumulate needs at least one term");
    BiLinPoly out(terms.front().coeff.field());
    for (const BiLinTerm& t : terms) bilin_accumulate_into(out, t);
    return out;
}

}  // namespace umbra
