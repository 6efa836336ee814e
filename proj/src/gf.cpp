#include "umbra/gf.hpp"

#include <sstream>

#include "umbra/error.hpp"

namespace umbra {

namespace detail {

struct FieldData {
    std::uint32_t p = 2;
    std::uint32_t nu = 1;
    std::uint32_t q = 2;
    std::vector<std::uint32_t> modulus;  // c0..c_nu, monic; empty when nu == 1
    // Discrete log and antilog tables for nu > 1; exp has 2(q - 1) entries so
    // a sum of two logs indexes it directly.
    std::vector<std::uint32_t> log;
    std::vector<std::uint32_t> exp;
};

}  // namespace detail

namespace {

using Digits = std::vector<std::uint32_t>;

// Remainder of a modulo a monic b over F_p (dense, constant term first).
Digits small_mod(Digits a, const Digits& b, std::uint32_t p) {
    const std::size_t db = b.size() - 1;
    while (a.size() > db) {
        const std::uint32_t c = a.back();
        if (c != 0) {
            const std::size_t shift = a.size() - 1 - db;
            for (std::size_t i = 0; i < db; ++i)
                a[shift + i] = (a[shift + i] + (p - c) * b[i] % p) % p;
        }
        a.pop_back();
    }
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

bool is_irreducible(const Digits& f, std::uint32_t p) {
    const std::size_t deg = f.size() - 1;
    // Trial division by every monic polynomial of degree 1..deg/2.
    for (std::size_t d = 1; d <= deg / 2; ++d) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < d; ++i) count *= p;
        for (std::uint64_t k = 0; k < count; ++k) {
            Digits g(d + 1, 0);
            g[d] = 1;
            std::uint64_t r = k;
            for (std::size_t i = 0; i < d; ++i) {
                g[i] = static_cast<std::uint32_t>(r % p);
                r /= p;
            }
            if (small_mod(f, g, p).empty()) return false;
        }
    }
    return true;
}

Digits smallest_irreducible(std::uint32_t p, std::uint32_t nu) {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < nu; ++i) count *= p;
    for (std::uint64_t k = 0; k < count; ++k) {
        // Lexicographic order with c0 most significant.
        Digits f(nu + 1, 0);
        f[nu] = 1;
        std::uint64_t r = k;
        for (std::uint32_t i = nu; i-- > 0;) {
            f[i] = static_cast<std::uint32_t>(r % p);
            r /= p;
        }
        if (f[0] == 0) continue;  // divisible by x
        if (is_irreducible(f, p)) return f;
    }
    throw Error(Errc::InvalidArgument, "no irreducible polynomial found");
}

// Product of two packed codes by schoolbook multiplication and reduction by
// the modulus; used once per field to build the log tables.
std::uint32_t mul_codes(std::uint32_t a, std::uint32_t b, const detail::FieldData& d) {
    const std::uint32_t p = d.p;
    const std::uint32_t nu = d.nu;
    std::uint32_t da[16];
    std::uint32_t db[16];
    std::uint64_t prod[31] = {};
    for (std::uint32_t i = 0; i < nu; ++i) {
        da[i] = a % p;
        db[i] = b % p;
        a /= p;
        b /= p;
    }
    for (std::uint32_t i = 0; i < nu; ++i) {
        if (da[i] == 0) continue;
        for (std::uint32_t j = 0; j < nu; ++j) prod[i + j] += std::uint64_t{da[i]} * db[j];
    }
    const auto& m = d.modulus;
    for (std::uint32_t k = 2 * nu - 1; k-- > nu;) {
        const std::uint64_t c = prod[k] % p;
        if (c == 0) continue;
        for (std::uint32_t i = 0; i < nu; ++i) prod[k - nu + i] += (p - c) * m[i];
    }
    std::uint32_t out = 0;
    for (std::uint32_t i = nu; i-- > 0;) out = out * p + static_cast<std::uint32_t>(prod[i] % p);
    return out;
}

// Smallest code generating the multiplicative group, then its powers.
void build_tables(detail::FieldData& d) {
    const std::uint32_t order = d.q - 1;
    std::vector<std::uint32_t> prime_factors;
    for (std::uint32_t r = order, f = 2; r > 1; ++f) {
        if (f * f > r) f = r;
        if (r % f == 0) {
            prime_factors.push_back(f);
            while (r % f == 0) r /= f;
        }
    }
    auto pow_code = [&](std::uint32_t a, std::uint64_t e) {
        std::uint32_t r = 1;
        while (e) {
            if (e & 1) r = mul_codes(r, a, d);
            a = mul_codes(a, a, d);
            e >>= 1;
        }
        return r;
    };
    std::uint32_t g = 2;
    for (;; ++g) {
        bool generates = true;
        for (std::uint32_t f : prime_factors)
            if (pow_code(g, order / f) == 1) generates = false;
        if (generates) break;
    }
    d.log.assign(d.q, 0);
    d.exp.assign(2 * std::size_t{order}, 0);
    std::uint32_t x = 1;
    for (std::uint32_t k = 0; k < order; ++k) {
        d.exp[k] = d.exp[k + order] = x;
        d.log[x] = k;
        x = mul_codes(x, g, d);
    }
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Field::Field(std::shared_ptr<const detail::FieldData> d)
    : d_(std::move(d)), p_(d_->p), prime_(d_->nu == 1) {
    if (!prime_) {
        log_ = d_->log.data();
        exp_ = d_->exp.data();
        order_ = d_->q - 1;
    }
}

Field Field::create(std::uint32_t p, std::uint32_t nu) {
    if (!is_prime(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
    if (nu == 0) throw Error(Errc::InvalidArgument, "extension degree must be positive");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < nu; ++i) {
        q *= p;
        if (q > kMaxOrder)
            throw Error(Errc::FieldTooLarge, "p^nu exceeds " + std::to_string(kMaxOrder));
    }
    auto d = std::make_shared<detail::FieldData>();
    d->p = p;
    d->nu = nu;
    d->q = static_cast<std::uint32_t>(q);
    if (nu > 1) {
        d->modulus = smallest_irreducible(p, nu);
        build_tables(*d);
    }
    return Field(std::move(d));
}

Field Field::of_order(std::uint64_t q) {
    if (q < 2) throw Error(Errc::NotPrime, "field order must be a prime power");
    if (q > kMaxOrder) throw Error(Errc::FieldTooLarge, "q exceeds " + std::to_string(kMaxOrder));
    std::uint32_t p = 0;
    for (std::uint32_t d = 2; d <= q; ++d) {
        if (q % d == 0) {
            p = d;
            break;
        }
    }
    std::uint32_t nu = 0;
    std::uint64_t r = q;
    while (r % p == 0) {
        r /= p;
        ++nu;
    }
    if (r != 1) throw Error(Errc::NotPrime, std::to_string(q) + " is not a prime power");
    return create(p, nu);
}

std::uint32_t Field::p() const noexcept { return d_->p; }
std::uint32_t Field::nu() const noexcept { return d_->nu; }
std::uint32_t Field::q() const noexcept { return d_->q; }
bool Field::is_prime_field() const noexcept { return prime_; }
const std::vector<std::uint32_t>& Field::modulus() const noexcept { return d_->modulus; }

Field::Rep Field::add_ext(Rep a, Rep b) const noexcept {
    if (p_ == 2) return a ^ b;
    Rep out = 0;
    Rep scale = 1;
    for (std::uint32_t i = 0; i < d_->nu; ++i) {
        const Rep s = (a % p_ + b % p_) % p_;
        out += s * scale;
        a /= p_;
        b /= p_;
        scale *= p_;
    }
    return out;
}

Field::Rep Field::sub_ext(Rep a, Rep b) const noexcept {
    if (p_ == 2) return a ^ b;
    Rep out = 0;
    Rep scale = 1;
    for (std::uint32_t i = 0; i < d_->nu; ++i) {
        const Rep s = (a % p_ + p_ - b % p_) % p_;
        out += s * scale;
        a /= p_;
        b /= p_;
        scale *= p_;
    }
    return out;
}

Field::Rep Field::pow(Rep a, std::uint64_t e) const noexcept {
    Rep result = 1;
    while (e > 0) {
        if (e & 1) result = mul(result, a);
        a = mul(a, a);
        e >>= 1;
    }
    return result;
}

Field::Rep Field::inv(Rep a) const {
    if (a == 0) throw Error(Errc::DivisionByZero, "inverse of zero in F_" + std::to_string(d_->q));
    if (!prime_) return exp_[(order_ - log_[a]) % order_];
    return pow(a, d_->q - 2);
}

Field::Rep Field::from_int(std::int64_t v) const noexcept {
    const std::int64_t p = p_;
    return static_cast<Rep>(((v % p) + p) % p);
}

Field::Rep Field::from_coords(std::span<const std::int64_t> coords) const {
    if (coords.size() > d_->nu)
        throw Error(Errc::InvalidArgument, "too many coordinates for F_" + std::to_string(d_->q));
    Rep out = 0;
    for (std::size_t i = coords.size(); i-- > 0;) out = out * p_ + from_int(coords[i]);
    return out;
}

std::vector<std::uint32_t> Field::coords(Rep a) const {
    std::vector<std::uint32_t> out(d_->nu);
    for (auto& c : out) {
        c = a % p_;
        a /= p_;
    }
    return out;
}

std::string Field::format(Rep a) const {
    if (prime_) return std::to_string(a);
    std::ostringstream os;
    os << '[';
    const auto cs = coords(a);
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (i) os << ',';
        os << cs[i];
    }
    os << ']';
    return os.str();
}

void FqElem::check_same(const FqElem& o) const {
    if (!(field_ == o.field_)) throw Error(Errc::FieldMismatch, "operands from different fields");
}

FqElem FqElem::operator+(const FqElem& o) const {
    check_same(o);
    return {field_, field_.add(code_, o.code_)};
}

FqElem FqElem::operator-(const FqElem& o) const {
    check_same(o);
    return {field_, field_.sub(code_, o.code_)};
}

FqElem FqElem::operator*(const FqElem& o) const {
    check_same(o);
    return {field_, field_.mul(code_, o.code_)};
}

FqElem FqElem::operator/(const FqElem& o) const {
    check_same(o);
    return {field_, field_.div(code_, o.code_)};
}

}  // namespace umbra
