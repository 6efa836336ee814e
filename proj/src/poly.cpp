#include "umbra/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "umbra/error.hpp"

namespace umbra {

namespace {

// Above these sizes the dispatchers switch from the quadratic kernels to the
// transform-based ones. Sparse operands stay on the schoolbook path because
// its cost scales with the number of nonzero terms.
constexpr std::size_t kFastMulMin = 96;
constexpr std::size_t kFastDivMin = 192;
// Kronecker packing makes extension-field transforms about three times longer.
constexpr std::size_t kFastGcdMinPrime = 1024;
constexpr std::size_t kFastGcdMinExt = 4096;

}  // namespace

Poly::Poly(Field field, std::vector<Rep> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) {
    trim();
}

Poly Poly::constant(const Field& f, Rep c) { return Poly(f, {c}); }

Poly Poly::monomial(const Field& f, Rep c, std::size_t exponent) {
    if (c == 0) return Poly(f);
    std::vector<Rep> v(exponent + 1, 0);
    v[exponent] = c;
    return Poly(f, std::move(v));
}

Poly Poly::binomial(const Field& f, std::size_t a, std::size_t b) {
    std::vector<Rep> v(std::max(a, b) + 1, 0);
    v[a] = f.add(v[a], 1);
    v[b] = f.sub(v[b], 1);
    return Poly(f, std::move(v));
}

void Poly::trim() noexcept {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

void Poly::check_same(const Poly& o) const {
    if (!(field_ == o.field_)) throw Error(Errc::FieldMismatch, "polynomials over different fields");
}

std::optional<std::size_t> Poly::degree() const noexcept {
    if (c_.empty()) return std::nullopt;
    return c_.size() - 1;
}

std::optional<std::size_t> Poly::ord() const noexcept {
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0) return i;
    return std::nullopt;
}

std::size_t Poly::nonzero_terms() const noexcept {
    return static_cast<std::size_t>(std::count_if(c_.begin(), c_.end(), [](Rep r) { return r != 0; }));
}

Poly Poly::operator-() const {
    Poly out(*this);
    for (auto& c : out.c_) c = field_.neg(c);
    return out;
}

Poly& Poly::operator+=(const Poly& o) {
    check_same(o);
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i)
        if (o.c_[i] != 0) c_[i] = field_.add(c_[i], o.c_[i]);
    trim();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    check_same(o);
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i)
        if (o.c_[i] != 0) c_[i] = field_.sub(c_[i], o.c_[i]);
    trim();
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    a.check_same(b);
    if (a.is_zero() || b.is_zero()) return Poly(a.field());
    if (a.size() == 1) return b.scale(a.c_[0]);
    if (b.size() == 1) return a.scale(b.c_[0]);
    const std::size_t small = std::min(a.size(), b.size());
    if (small < kFastMulMin) return kernels::mul_schoolbook(a, b);
    // Quadratic cost on nonzero terms beats the transform for sparse inputs.
    const double sparse_cost = static_cast<double>(std::min(a.nonzero_terms(), b.nonzero_terms())) *
                               static_cast<double>(std::max(a.size(), b.size()));
    const double n = static_cast<double>(a.size() + b.size());
    if (sparse_cost < 24.0 * n * std::max(1.0, std::log2(n))) return kernels::mul_schoolbook(a, b);
    return kernels::mul_fast(a, b);
}

Poly Poly::scale(Rep c) const {
    if (c == 0) return Poly(field_);
    if (c == 1) return *this;
    Poly out(*this);
    for (auto& v : out.c_)
        if (v != 0) v = field_.mul(v, c);
    return out;
}

Poly Poly::monic() const {
    if (c_.empty() || c_.back() == 1) return *this;
    return scale(field_.inv(c_.back()));
}

Poly Poly::shift_up(std::size_t k) const {
    if (c_.empty() || k == 0) return *this;
    std::vector<Rep> v(c_.size() + k, 0);
    std::copy(c_.begin(), c_.end(), v.begin() + static_cast<std::ptrdiff_t>(k));
    return Poly(field_, std::move(v));
}

Poly Poly::shift_down(std::size_t k) const {
    if (k >= c_.size()) return Poly(field_);
    return Poly(field_, std::vector<Rep>(c_.begin() + static_cast<std::ptrdiff_t>(k), c_.end()));
}

Poly Poly::truncate(std::size_t n) const {
    if (n >= c_.size()) return *this;
    return Poly(field_, std::vector<Rep>(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(n)));
}

Poly Poly::frobenius(unsigned k) const {
    if (c_.size() <= 1 || k == 0) return *this;
    std::uint64_t step = 1;
    constexpr std::uint64_t kLimit = std::uint64_t{1} << 34;
    for (unsigned i = 0; i < k; ++i) {
        step *= field_.q();
        if (step > kLimit) throw Error(Errc::InvalidArgument, "Frobenius power too large");
    }
    const std::uint64_t new_size = (c_.size() - 1) * step + 1;
    if (new_size > kLimit) throw Error(Errc::InvalidArgument, "Frobenius image degree too large");
    std::vector<Rep> v(static_cast<std::size_t>(new_size), 0);
    for (std::size_t i = 0; i < c_.size(); ++i) v[i * step] = c_[i];
    return Poly(field_, std::move(v));
}

std::optional<Poly> Poly::qth_root() const {
    const std::size_t q = field_.q();
    if (c_.empty()) return *this;
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0 && i % q != 0) return std::nullopt;
    std::vector<Rep> v((c_.size() - 1) / q + 1, 0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = c_[i * q];
    return Poly(field_, std::move(v));
}

FqElem Poly::eval(const FqElem& at) const {
    if (!(at.field() == field_)) throw Error(Errc::FieldMismatch, "evaluation point from another field");
    Rep acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = field_.add(field_.mul(acc, at.code()), c_[i]);
    return FqElem(field_, acc);
}

std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw Error(Errc::DivisionByZero, "polynomial division by zero");
    if (!(a.field() == b.field())) throw Error(Errc::FieldMismatch, "polynomials over different fields");
    if (a.size() < b.size()) return {Poly(a.field()), a};
    if (b.size() == 1) return {a.scale(a.field().inv(b.lead())), Poly(a.field())};
    const std::size_t qlen = a.size() - b.size() + 1;
    if (qlen >= kFastDivMin && b.size() >= kFastDivMin && b.nonzero_terms() * 8 > b.size())
        return kernels::divrem_fast(a, b);
    return kernels::divrem_schoolbook(a, b);
}

Poly rem(const Poly& a, const Poly& b) { return divrem(a, b).second; }

Poly exact_div(const Poly& a, const Poly& b) {
    auto [q, r] = divrem(a, b);
    if (!r.is_zero()) throw Error(Errc::NotPolynomial, "inexact polynomial division");
    return q;
}

Poly gcd(const Poly& a, const Poly& b) {
    if (!(a.field() == b.field())) throw Error(Errc::FieldMismatch, "polynomials over different fields");
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.size() == 1 || b.size() == 1) return Poly::constant(a.field(), 1);
    const std::size_t fast_min = a.field().is_prime_field() ? kFastGcdMinPrime : kFastGcdMinExt;
    if (std::min(a.size(), b.size()) >= fast_min) return kernels::gcd_fast(a, b);
    return kernels::gcd_euclid(a, b);
}

Poly pow(const Poly& a, std::uint64_t e) {
    Poly result = Poly::constant(a.field(), 1);
    Poly base = a;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

namespace kernels {

namespace {

std::vector<std::size_t> nonzero_positions(std::span<const Field::Rep> v) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) idx.push_back(i);
    return idx;
}

}  // namespace

Poly mul_schoolbook(const Poly& a, const Poly& b) {
    const Field& f = a.field();
    if (a.is_zero() || b.is_zero()) return Poly(f);
    const auto ac = a.coeffs();
    const auto bc = b.coeffs();
    const auto an = nonzero_positions(ac);
    const auto bn = nonzero_positions(bc);
    const std::size_t out_len = ac.size() + bc.size() - 1;
    if (f.is_prime_field()) {
        const std::uint64_t p = f.p();
        std::vector<std::uint64_t> acc(out_len, 0);
        const bool b_sparse = bn.size() * 4 < bc.size();
        // Products are < 2^32, so 2^32 of them fit in an accumulator.
        for (std::size_t i : an) {
            const std::uint64_t ai = ac[i];
            std::uint64_t* row = acc.data() + i;
            if (b_sparse) {
                for (std::size_t j : bn) row[j] += ai * bc[j];
            } else {
                for (std::size_t j = 0; j < bc.size(); ++j) row[j] += ai * bc[j];
            }
        }
        std::vector<Field::Rep> out(out_len);
        for (std::size_t k = 0; k < out_len; ++k) out[k] = static_cast<Field::Rep>(acc[k] % p);
        return Poly(f, std::move(out));
    }
    std::vector<Field::Rep> out(out_len, 0);
    for (std::size_t i : an)
        for (std::size_t j : bn) out[i + j] = f.add(out[i + j], f.mul(ac[i], bc[j]));
    return Poly(f, std::move(out));
}

std::pair<Poly, Poly> divrem_schoolbook(const Poly& a, const Poly& b) {
    const Field& f = a.field();
    if (b.is_zero()) throw Error(Errc::DivisionByZero, "polynomial division by zero");
    if (a.size() < b.size()) return {Poly(f), a};
    const auto ac = a.coeffs();
    const auto bc = b.coeffs();
    const std::size_t db = bc.size() - 1;
    const std::size_t qlen = ac.size() - db;
    const Field::Rep inv_lead = f.inv(bc[db]);
    std::vector<std::size_t> bn;
    for (std::size_t j = 0; j < db; ++j)
        if (bc[j] != 0) bn.push_back(j);
    std::vector<Field::Rep> quo(qlen, 0);
    if (f.is_prime_field()) {
        const std::uint64_t p = f.p();
        std::vector<std::uint64_t> r(ac.begin(), ac.end());
        for (std::size_t i = ac.size(); i-- > db;) {
            const std::uint64_t c = r[i] % p;
            if (c == 0) continue;
            const std::uint64_t qc = c * inv_lead % p;
            quo[i - db] = static_cast<Field::Rep>(qc);
            const std::uint64_t neg = p - qc;
            std::uint64_t* row = r.data() + (i - db);
            for (std::size_t j : bn) row[j] += neg * bc[j];
        }
        std::vector<Field::Rep> rv(db);
        for (std::size_t k = 0; k < db; ++k) rv[k] = static_cast<Field::Rep>(r[k] % p);
        return {Poly(f, std::move(quo)), Poly(f, std::move(rv))};
    }
    std::vector<Field::Rep> r(ac.begin(), ac.end());
    for (std::size_t i = ac.size(); i-- > db;) {
        const Field::Rep c = r[i];
        if (c == 0) continue;
        const Field::Rep qc = f.mul(c, inv_lead);
        quo[i - db] = qc;
        const std::size_t base = i - db;
        for (std::size_t j : bn) r[base + j] = f.sub(r[base + j], f.mul(qc, bc[j]));
    }
    r.resize(db);
    return {Poly(f, std::move(quo)), Poly(f, std::move(r))};
}

Poly gcd_euclid(const Poly& a, const Poly& b) {
    Poly x = a;
    Poly y = b;
    while (!y.is_zero()) {
        Poly r = divrem_schoolbook(x, y).second;
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic();
}

}  // namespace kernels

}  // namespace umbra
