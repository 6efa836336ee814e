// Quasi-linear kernels for F_q[x]: NTT multiplication, Newton division and
// half-gcd. Extension-field polynomials are multiplied through Kronecker
// packing of their F_p coordinates.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "umbra/error.hpp"
#include "umbra/poly.hpp"

namespace umbra::kernels {

namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using Rep = Field::Rep;

struct NttPrime {
    u32 mod;
    u32 root;
    unsigned max_log;
};

constexpr NttPrime kPrimeA{469762049u, 3u, 26};  // 7*2^26+1
constexpr NttPrime kPrimeB{998244353u, 3u, 23};  // 119*2^23+1

u64 pow_mod(u64 b, u64 e, u64 m) {
    u64 r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

// Twiddles w_{2h}^k at index h + k for every power of two h, plus Shoup
// companions floor(w 2^32 / mod). Entries for a given h do not depend on the
// transform size, so one table per prime serves every call; it only grows.
struct Twiddles {
    std::vector<u32> w, wp, iw, iwp;
};

u32 shoup(u32 w, u32 mod) { return static_cast<u32>((u64{w} << 32) / mod); }

// x * w mod m for x < 2^32, given wp = shoup(w); result in [0, 2m).
inline u32 mul_shoup(u32 x, u32 w, u32 wp, u32 mod) {
    const u32 q = static_cast<u32>((u64{x} * wp) >> 32);
    return x * w - q * mod;
}

std::shared_ptr<const Twiddles> twiddles(const NttPrime& P, std::size_t n) {
    static std::mutex lock;
    static std::shared_ptr<const Twiddles> cache[2];
    std::shared_ptr<const Twiddles>& slot = cache[P.mod == kPrimeA.mod ? 0 : 1];
    std::lock_guard<std::mutex> guard(lock);
    if (slot && slot->w.size() >= n) return slot;
    auto t = std::make_shared<Twiddles>();
    const std::size_t size = std::max<std::size_t>(n, 2);
    t->w.assign(size, 0);
    t->wp.assign(size, 0);
    t->iw.assign(size, 0);
    t->iwp.assign(size, 0);
    for (std::size_t h = 1; h < size; h <<= 1) {
        const u64 root = pow_mod(P.root, (P.mod - 1) / (2 * h), P.mod);
        const u64 iroot = pow_mod(root, P.mod - 2, P.mod);
        u64 x = 1;
        u64 ix = 1;
        for (std::size_t k = 0; k < h; ++k) {
            t->w[h + k] = static_cast<u32>(x);
            t->iw[h + k] = static_cast<u32>(ix);
            t->wp[h + k] = shoup(t->w[h + k], P.mod);
            t->iwp[h + k] = shoup(t->iw[h + k], P.mod);
            x = x * root % P.mod;
            ix = ix * iroot % P.mod;
        }
    }
    slot = t;
    return slot;
}

// Butterflies keep values in [0, 2 Mod) and reduce once at the end; with
// Mod < 2^30 every intermediate stays below 2^32.

// Decimation in frequency: natural order in, bit-reversed order out.
template <u32 Mod>
void ntt_forward(u32* a, std::size_t n, const Twiddles& t) {
    constexpr u32 m2 = 2 * Mod;
    for (std::size_t h = n / 2; h >= 1; h >>= 1) {
        const u32* w = t.w.data() + h;
        const u32* wp = t.wp.data() + h;
        for (std::size_t i = 0; i < n; i += 2 * h) {
            u32* lo = a + i;
            u32* hi = lo + h;
            for (std::size_t k = 0; k < h; ++k) {
                const u32 u = lo[k];
                const u32 v = hi[k];
                const u32 s = u + v;
                lo[k] = s >= m2 ? s - m2 : s;
                hi[k] = mul_shoup(u + m2 - v, w[k], wp[k], Mod);
            }
        }
    }
}

// Decimation in time: bit-reversed order in, natural order out, scaled by n.
template <u32 Mod>
void ntt_inverse(u32* a, std::size_t n, const Twiddles& t) {
    constexpr u32 m2 = 2 * Mod;
    for (std::size_t h = 1; h < n; h <<= 1) {
        const u32* w = t.iw.data() + h;
        const u32* wp = t.iwp.data() + h;
        for (std::size_t i = 0; i < n; i += 2 * h) {
            u32* lo = a + i;
            u32* hi = lo + h;
            for (std::size_t k = 0; k < h; ++k) {
                const u32 u = lo[k];
                const u32 v = mul_shoup(hi[k], w[k], wp[k], Mod);
                const u32 s = u + v;
                const u32 d = u + m2 - v;
                lo[k] = s >= m2 ? s - m2 : s;
                hi[k] = d >= m2 ? d - m2 : d;
            }
        }
    }
}

std::vector<u32> to_u32(std::span<const Rep> v) { return {v.begin(), v.end()}; }

// Kronecker substitution: coordinate d of coefficient i goes to slot i*s + d
// with s = 2nu - 1, wide enough that coordinate products never overlap.
// Prime fields pack with s = 1.
std::size_t slot_width(const Field& f) { return f.is_prime_field() ? 1 : 2 * f.nu() - 1; }

std::vector<u32> pack(const Poly& x) {
    const Field& f = x.field();
    if (f.is_prime_field()) return to_u32(x.coeffs());
    const u32 p = f.p();
    const std::size_t nu = f.nu();
    const std::size_t s = slot_width(f);
    std::vector<u32> out(x.size() * s, 0);
    const auto xc = x.coeffs();
    for (std::size_t i = 0; i < xc.size(); ++i) {
        Rep r = xc[i];
        for (std::size_t d = 0; d < nu; ++d) {
            out[i * s + d] = r % p;
            r /= p;
        }
    }
    return out;
}

// Inverse of pack for a product: fold each slot back through the modulus.
Poly unpack(const Field& f, const std::vector<u32>& c, std::size_t out_len) {
    if (f.is_prime_field()) {
        std::vector<Rep> out(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(std::min(out_len, c.size())));
        return Poly(f, std::move(out));
    }
    const u32 p = f.p();
    const std::size_t nu = f.nu();
    const std::size_t s = slot_width(f);
    const auto& m = f.modulus();
    std::vector<Rep> out(out_len, 0);
    std::array<u64, 31> g{};
    for (std::size_t k = 0; k < out_len; ++k) {
        for (std::size_t d = 0; d < s; ++d) {
            const std::size_t idx = k * s + d;
            g[d] = idx < c.size() ? c[idx] : 0;
        }
        for (std::size_t deg = s; deg-- > nu;) {
            const u64 lead = g[deg] % p;
            if (lead == 0) continue;
            for (std::size_t i = 0; i < nu; ++i) g[deg - nu + i] += (p - lead) * m[i];
        }
        Rep r = 0;
        for (std::size_t d = nu; d-- > 0;) r = r * p + static_cast<Rep>(g[d] % p);
        out[k] = r;
    }
    return Poly(f, std::move(out));
}

// v mod p by a multiply-high with floor(2^64 / p); the estimate is off by
// at most one.
struct Reducer {
    explicit Reducer(u32 p) : p(p), m(~u64{0} / p) {}
    u32 operator()(u64 v) const {
        const u64 q = static_cast<u64>((static_cast<unsigned __int128>(v) * m) >> 64);
        const u64 r = v - q * p;
        return static_cast<u32>(r >= p ? r - p : r);
    }
    u32 p;
    u64 m;
};

using Term = std::pair<std::size_t, std::size_t>;

// The sums below modulo one transform prime, output i truncated to lens[i].
template <u32 Mod, u32 Root>
std::vector<std::vector<u32>> sums_mod(const std::vector<std::vector<u32>>& in,
                                       const std::vector<std::vector<Term>>& outs,
                                       const std::vector<std::size_t>& lens, std::size_t n) {
    const auto t = twiddles(NttPrime{Mod, Root, 0}, n);
    std::vector<std::vector<u32>> f(in.size());
    for (const auto& terms : outs)
        for (auto [i, j] : terms)
            for (std::size_t k : {i, j}) {
                if (!f[k].empty()) continue;
                f[k].assign(n, 0);
                for (std::size_t e = 0; e < in[k].size(); ++e) f[k][e] = in[k][e] % Mod;
                ntt_forward<Mod>(f[k].data(), n, *t);
            }
    const u32 inv_n = static_cast<u32>(pow_mod(n, Mod - 2, Mod));
    const u32 inv_np = shoup(inv_n, Mod);
    std::vector<std::vector<u32>> res(outs.size());
    for (std::size_t o = 0; o < outs.size(); ++o) {
        std::vector<u32>& r = res[o];
        r.assign(n, 0);
        for (auto [i, j] : outs[o]) {
            const u32* x = f[i].data();
            const u32* y = f[j].data();
            for (std::size_t e = 0; e < n; ++e) {
                const u32 s = r[e] + static_cast<u32>(u64{x[e]} * y[e] % Mod);
                r[e] = s >= Mod ? s - Mod : s;
            }
        }
        for (std::size_t e = 0; e < n; ++e) r[e] = mul_shoup(r[e], inv_n, inv_np, Mod);
        ntt_inverse<Mod>(r.data(), n, *t);
        r.resize(lens[o]);
        for (u32& v : r) v = v >= Mod ? v - Mod : v;
    }
    return res;
}

// Several sums of products sum_k in[i_k] * in[j_k] of nonempty vectors with
// entries < p, sharing one forward transform per input: exact integers
// reduced mod p.
std::vector<std::vector<u32>> convolve_sums_fp(const std::vector<std::vector<u32>>& in,
                                               const std::vector<std::vector<Term>>& outs, u32 p) {
    std::size_t need = 1;
    u64 bound = 0;
    std::vector<std::size_t> lens(outs.size(), 1);
    for (std::size_t o = 0; o < outs.size(); ++o) {
        u64 terms = 0;
        for (auto [i, j] : outs[o]) {
            lens[o] = std::max(lens[o], in[i].size() + in[j].size() - 1);
            terms += std::min(in[i].size(), in[j].size());
        }
        need = std::max(need, lens[o]);
        bound = std::max(bound, terms);
    }
    std::size_t n = 1;
    unsigned log = 0;
    while (n < need) n <<= 1, ++log;
    const double wide = static_cast<double>(bound) * (p - 1) * (p - 1);
    const bool single = wide < kPrimeA.mod && log <= kPrimeA.max_log;
    if (!single && (log > kPrimeB.max_log || wide >= 4.6e17))
        throw Error(Errc::InvalidArgument, "polynomial product exceeds transform capacity");

    auto ca = sums_mod<kPrimeA.mod, kPrimeA.root>(in, outs, lens, n);
    if (single) {
        const Reducer red(p);
        for (auto& r : ca)
            for (u32& v : r) v = red(v);
        return ca;
    }
    const auto cb = sums_mod<kPrimeB.mod, kPrimeB.root>(in, outs, lens, n);
    const u64 ma = kPrimeA.mod;
    const u64 mb = kPrimeB.mod;
    const u64 inv_ma_mod_mb = pow_mod(ma % mb, mb - 2, mb);
    const Reducer red(p);
    for (std::size_t o = 0; o < ca.size(); ++o)
        for (std::size_t e = 0; e < ca[o].size(); ++e) {
            const u64 t = (cb[o][e] + mb - ca[o][e] % mb) % mb * inv_ma_mod_mb % mb;
            ca[o][e] = red(ca[o][e] + ma * t);
        }
    return ca;
}

Poly mul_packed(const Poly& a, const Poly& b) {
    if (a.coeffs().data() == b.coeffs().data()) {
        const auto c = convolve_sums_fp({pack(a)}, {{{0, 0}}}, a.field().p());
        return unpack(a.field(), c[0], 2 * a.size() - 1);
    }
    const auto c = convolve_sums_fp({pack(a), pack(b)}, {{{0, 1}}}, a.field().p());
    return unpack(a.field(), c[0], a.size() + b.size() - 1);
}

// Entries this long or longer make sharing transforms worthwhile.
constexpr std::size_t kSharedMin = 48;

bool all_long(std::initializer_list<const Poly*> ps) {
    std::size_t longest = 0;
    for (const Poly* x : ps) {
        if (x->size() < kSharedMin) return false;
        longest = std::max(longest, x->size());
    }
    return longest >= 2 * kSharedMin;
}

// Power-series inverse of `a` modulo x^n by Newton iteration; a(0) != 0.
Poly series_inverse(const Poly& a, std::size_t n) {
    const Field& f = a.field();
    Poly g = Poly::constant(f, f.inv(a.coeff(0)));
    std::size_t k = 1;
    while (k < n) {
        k = std::min(2 * k, n);
        // g <- g * (2 - a g) mod x^k
        Poly ag = (a.truncate(k) * g).truncate(k);
        Poly two_minus = Poly::from_int(f, 2) - ag;
        g = (g * two_minus).truncate(k);
    }
    return g;
}

Poly reversed(const Poly& a, std::size_t len) {
    std::vector<Rep> v(len, 0);
    const auto ac = a.coeffs();
    for (std::size_t i = 0; i < ac.size() && i < len; ++i) v[len - 1 - i] = ac[i];
    return Poly(a.field(), std::move(v));
}

using Matrix = std::array<Poly, 4>;  // row-major 2x2

Matrix identity(const Field& f) {
    return {Poly::constant(f, 1), Poly(f), Poly(f), Poly::constant(f, 1)};
}

Matrix mat_mul(const Matrix& x, const Matrix& y) {
    if (all_long({&x[0], &x[1], &x[2], &x[3], &y[0], &y[1], &y[2], &y[3]})) {
        const Field& f = x[0].field();
        std::vector<std::vector<u32>> in;
        for (const Poly* e : {&x[0], &x[1], &x[2], &x[3], &y[0], &y[1], &y[2], &y[3]}) in.push_back(pack(*e));
        const auto c = convolve_sums_fp(
            in, {{{0, 4}, {1, 6}}, {{0, 5}, {1, 7}}, {{2, 4}, {3, 6}}, {{2, 5}, {3, 7}}}, f.p());
        const std::size_t s = slot_width(f);
        auto at = [&](std::size_t k) { return unpack(f, c[k], (c[k].size() + 1) / s); };
        return {at(0), at(1), at(2), at(3)};
    }
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3]};
}

std::pair<Poly, Poly> apply(const Matrix& m, const Poly& a, const Poly& b) {
    if (all_long({&m[0], &m[1], &m[2], &m[3], &a, &b})) {
        const Field& f = a.field();
        std::vector<std::vector<u32>> in;
        for (const Poly* e : {&m[0], &m[1], &m[2], &m[3], &a, &b}) in.push_back(pack(*e));
        const auto c = convolve_sums_fp(in, {{{0, 4}, {1, 5}}, {{2, 4}, {3, 5}}}, f.p());
        const std::size_t s = slot_width(f);
        return {unpack(f, c[0], (c[0].size() + 1) / s), unpack(f, c[1], (c[1].size() + 1) / s)};
    }
    return {m[0] * a + m[1] * b, m[2] * a + m[3] * b};
}

std::size_t deg_or_zero(const Poly& p) { return p.is_zero() ? 0 : p.size() - 1; }

bool deg_less(const Poly& p, std::size_t m) { return p.is_zero() || p.size() - 1 < m; }

// Matrix M with M (a, b) = (r_j, r_{j+1}), consecutive remainders of the
// Euclidean sequence of (a, b) with deg r_j >= ceil(deg a / 2) > deg r_{j+1}.
// Requires deg a > deg b.
Matrix half_gcd(const Poly& a, const Poly& b) {
    const Field& f = a.field();
    const std::size_t n = deg_or_zero(a);
    const std::size_t m = (n + 1) / 2;
    if (deg_less(b, m)) return identity(f);
    if (n < 128) {
        Matrix r = identity(f);
        Poly x = a;
        Poly y = b;
        while (!deg_less(y, m)) {
            auto [q, rr] = divrem(x, y);
            r = mat_mul({Poly(f), Poly::constant(f, 1), Poly::constant(f, 1), -q}, r);
            x = std::move(y);
            y = std::move(rr);
        }
        return r;
    }
    Matrix r = half_gcd(a.shift_down(m), b.shift_down(m));
    auto [c, d] = apply(r, a, b);
    if (deg_less(d, m)) return r;
    auto [q, e] = divrem(c, d);
    r = mat_mul({Poly(f), Poly::constant(f, 1), Poly::constant(f, 1), -q}, r);
    if (deg_less(e, m)) return r;
    const std::size_t k = 2 * m - deg_or_zero(d);
    Matrix s = half_gcd(d.shift_down(k), e.shift_down(k));
    return mat_mul(s, r);
}

}  // namespace

Poly mul_fast(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.field());
    return mul_packed(a, b);
}

std::pair<Poly, Poly> divrem_fast(const Poly& a, const Poly& b) {
    const Field& f = a.field();
    if (b.is_zero()) throw Error(Errc::DivisionByZero, "polynomial division by zero");
    if (a.size() < b.size()) return {Poly(f), a};
    const std::size_t qlen = a.size() - b.size() + 1;
    const Poly rb = reversed(b, b.size());
    const Poly inv = series_inverse(rb, qlen);
    const Poly ra = reversed(a, a.size()).truncate(qlen);
    const Poly rq = (ra * inv).truncate(qlen);
    Poly q = reversed(rq, qlen);
    Poly r = a - q * b;
    return {std::move(q), std::move(r)};
}

Poly gcd_fast(const Poly& a, const Poly& b) {
    Poly x = a;
    Poly y = b;
    if (x.size() < y.size()) std::swap(x, y);
    if (!y.is_zero() && x.size() == y.size()) {
        Poly r = divrem(x, y).second;
        x = std::move(y);
        y = std::move(r);
    }
    while (!y.is_zero()) {
        if (y.size() < 256) return gcd_euclid(x, y);
        const Matrix m = half_gcd(x, y);
        auto [c, d] = apply(m, x, y);
        if (d.is_zero()) return c.monic();
        Poly r = divrem(c, d).second;
        x = std::move(d);
        y = std::move(r);
    }
    return x.monic();
}

}  // namespace umbra::kernels
