#include "umbra/genfun.hpp"

#include <algorithm>
#include <map>

#include "umbra/error.hpp"
#include "umbra/laurent.hpp"

namespace umbra {

namespace {

// Relative x-adic precision carried through the valuation profile.
constexpr std::int64_t kRelPrec = 24;
// Cap on the extra precision spent certifying exact valuations.
constexpr std::int64_t kMaxSlack = std::int64_t{1} << 20;

std::int64_t geometric(std::uint64_t q, std::size_t j) {
    std::int64_t s = 0;
    std::int64_t p = 1;
    for (std::size_t i = 0; i < j; ++i) {
        s += p;
        p *= static_cast<std::int64_t>(q);
    }
    return s;
}

// A product of Frobenius powers r^(q^k) of canonical rational functions.
using Factor = std::pair<const RatFn*, unsigned>;
using Product = std::vector<Factor>;

// sum of the products over a common denominator built from the factors'
// denominators, so the only gcd is the final reduction. Terms whose
// denominators share no factor objects are combined with prefix and suffix
// products; otherwise each term is lifted by the factors it lacks.
RatFn sum_of_products(const Field& f, const std::vector<Product>& terms) {
    using Key = std::pair<const Poly*, unsigned>;
    std::vector<Poly> nums;
    std::vector<std::map<Key, unsigned>> keys;
    std::map<Key, Poly> powers;
    auto power = [&](const Key& k) -> const Poly& {
        auto it = powers.find(k);
        if (it == powers.end()) it = powers.emplace(k, k.first->frobenius(k.second)).first;
        return it->second;
    };
    for (const auto& t : terms) {
        Poly n = Poly::constant(f, 1);
        std::map<Key, unsigned> ks;
        bool zero = false;
        for (const auto& [r, k] : t) {
            if (r->is_zero()) zero = true;
            if (zero) break;
            n = n * r->num().frobenius(k);
            if (!r->den().is_one()) ++ks[{&r->den(), k}];
        }
        if (zero) continue;
        nums.push_back(std::move(n));
        keys.push_back(std::move(ks));
    }
    if (nums.empty()) return RatFn(f);

    auto product_of = [&](const std::map<Key, unsigned>& ks) {
        Poly p = Poly::constant(f, 1);
        for (const auto& [k, e] : ks)
            for (unsigned i = 0; i < e; ++i) p = p * power(k);
        return p;
    };
    bool disjoint = true;
    std::map<Key, unsigned> common;
    for (const auto& ks : keys)
        for (const auto& [k, e] : ks) {
            auto [it, fresh] = common.emplace(k, e);
            if (!fresh) {
                disjoint = false;
                it->second = std::max(it->second, e);
            }
        }

    const std::size_t n = nums.size();
    Poly num(f);
    Poly den = Poly::constant(f, 1);
    if (disjoint) {
        std::vector<Poly> d;
        for (const auto& ks : keys) d.push_back(product_of(ks));
        std::vector<Poly> suffix(n + 1, Poly::constant(f, 1));
        for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] * d[i];
        Poly prefix = Poly::constant(f, 1);
        for (std::size_t i = 0; i < n; ++i) {
            num += nums[i] * prefix * suffix[i + 1];
            prefix = prefix * d[i];
        }
        den = std::move(prefix);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            std::map<Key, unsigned> missing;
            for (const auto& [k, e] : common) {
                auto it = keys[i].find(k);
                const unsigned have = it == keys[i].end() ? 0 : it->second;
                if (e > have) missing[k] = e - have;
            }
            num += nums[i] * product_of(missing);
        }
        den = product_of(common);
    }
    if (num.is_zero()) return RatFn(f);
    return RatFn(std::move(num), std::move(den));
}

}  // namespace

FormalLinSeries::FormalLinSeries(Field field, std::vector<RatFn> coeffs)
    : field_(std::move(field)), b_(std::move(coeffs)) {
    if (b_.empty()) throw Error(Errc::InvalidArgument, "a truncated series needs at least level 0");
}

FormalLinSeries FormalLinSeries::identity(const Field& f, std::size_t order) {
    std::vector<RatFn> b(order + 1, RatFn(f));
    b[0] = RatFn::one(f);
    return FormalLinSeries(f, std::move(b));
}

FormalLinSeries FormalLinSeries::from_linpoly(const LinPoly& u, std::size_t order) {
    std::vector<RatFn> b(order + 1, RatFn(u.field()));
    for (std::size_t j = 0; j <= order; ++j) b[j] = u.coeff(j);
    return FormalLinSeries(u.field(), std::move(b));
}

FormalLinSeries FormalLinSeries::truncate(std::size_t order) const {
    if (order >= this->order()) return *this;
    return FormalLinSeries(field_, std::vector<RatFn>(b_.begin(), b_.begin() + static_cast<std::ptrdiff_t>(order + 1)));
}

FormalLinSeries exp_series(const DeltaOperator& op, std::size_t m) {
    if (m > op.order())
        throw Error(Errc::OrderExceeded, "series order " + std::to_string(m) + " exceeds operator order " +
                                             std::to_string(op.order()));
    const Field& f = op.field();
    std::vector<RatFn> b{RatFn::one(f)};
    for (std::size_t j = 0; j < m; ++j) b.push_back(b[j].frobenius(1) / op.c(j + 1));
    return FormalLinSeries(f, std::move(b));
}

FormalLinSeries compositional_inverse(const FormalLinSeries& e) {
    const Field& f = e.field();
    if (!e.coeff(0).is_one()) throw Error(Errc::InvalidArgument, "inversion needs a series with b_0 = 1");
    std::vector<RatFn> beta{RatFn::one(f)};
    for (std::size_t l = 1; l <= e.order(); ++l) {
        std::vector<Product> terms;
        for (std::size_t m = 1; m <= l; ++m)
            terms.push_back({{&e.coeff(m), 0}, {&beta[l - m], static_cast<unsigned>(m)}});
        RatFn s = sum_of_products(f, terms);
        beta.push_back(-s);
    }
    return FormalLinSeries(f, std::move(beta));
}

FormalLinSeries log_series(const DeltaOperator& op, std::size_t m) { return compositional_inverse(exp_series(op, m)); }

FormalLinSeries series_compose(const FormalLinSeries& u, const FormalLinSeries& v) {
    if (!(u.field() == v.field())) throw Error(Errc::FieldMismatch, "series over different fields");
    const Field& f = u.field();
    const std::size_t order = std::min(u.order(), v.order());
    std::vector<RatFn> out;
    for (std::size_t m = 0; m <= order; ++m) {
        std::vector<Product> terms;
        for (std::size_t j = 0; j <= m; ++j)
            terms.push_back({{&u.coeff(j), 0}, {&v.coeff(m - j), static_cast<unsigned>(j)}});
        out.push_back(sum_of_products(f, terms));
    }
    return FormalLinSeries(f, std::move(out));
}

std::optional<std::size_t> identity_mismatch(const FormalLinSeries& s) {
    if (!s.coeff(0).is_one()) return 0;
    for (std::size_t j = 1; j <= s.order(); ++j)
        if (!s.coeff(j).is_zero()) return j;
    return std::nullopt;
}

FixedPointReport delta_fixed_point_check(const DeltaOperator& op, const FormalLinSeries& s) {
    if (s.order() > op.order()) throw Error(Errc::OrderExceeded, "series order exceeds operator order");
    FixedPointReport r;
    for (std::size_t n = 1; n <= s.order(); ++n) {
        if (op.c(n) * s.coeff(n) != s.coeff(n - 1).frobenius(1)) {
            r.ok = false;
            r.first_failure = n;
            break;
        }
    }
    return r;
}

GeneratingReport generating_identity_check(const FormalLinSeries& e, const FormalLinSeries& log,
                                           const BasicSequence& seq) {
    const Field& f = e.field();
    const std::size_t m = std::min({e.order(), log.order(), seq.order()});
    GeneratingReport r{true, std::nullopt, BiLinPoly(f), BiLinPoly(f)};
    for (std::size_t j = 0; j <= m; ++j) {
        if (e.coeff(j).is_zero()) continue;
        for (std::size_t i = 0; i + j <= m; ++i) {
            if (log.coeff(i).is_zero()) continue;
            r.lhs.add(j, i + j, e.coeff(j) * log.coeff(i).frobenius(static_cast<unsigned>(j)));
        }
    }
    for (std::size_t n = 0; n <= m; ++n)
        for (std::size_t j = 0; j <= n; ++j) r.rhs.add(j, n, seq.gamma(n, j));
    r.first_difference = first_difference(r.lhs, r.rhs);
    r.ok = !r.first_difference;
    return r;
}

GeneratingReport generating_identity_check(const DeltaOperator& op, const BasicSequence& seq, std::size_t m) {
    if (m > seq.order()) throw Error(Errc::OrderExceeded, "identity order exceeds the basic sequence order");
    const FormalLinSeries e = exp_series(op, m);
    return generating_identity_check(e, compositional_inverse(e), seq);
}

ValuationReport valuation_profile(const DeltaOperator& op, std::size_t m) {
    if (m > op.order()) throw Error(Errc::OrderExceeded, "profile order exceeds operator order");
    const Field& f = op.field();
    const std::uint64_t q = f.q();
    ValuationReport r;
    for (std::size_t l = 1; l <= op.order(); ++l) {
        const ValExp v = op.sigma(l).valuation();
        const bool bad = l == 1 ? v != ValExp(0) : v < ValExp(0);
        if (bad) {
            r.status = ValuationReport::Status::HypothesisNotMet;
            r.hypothesis_index = l;
            return r;
        }
    }

    // Slack above the bounds: with the full geometric slack every beta_l is
    // known to absolute precision kRelPrec, so small exact valuations are
    // certified and not only the bound.
    const std::int64_t extra = std::min<std::int64_t>(geometric(q, m), kMaxSlack);

    // b_j with relative precision extra + kRelPrec: Frobenius multiplies
    // relative precision by q and inversion keeps it.
    const std::int64_t rel = extra + kRelPrec;
    std::vector<LaurentSeries> b{LaurentSeries(f, 0, {1}, rel)};
    for (std::size_t j = 1; j <= m; ++j) {
        const RatFn& c = op.c(j);
        const LaurentSeries cj = LaurentSeries::from_ratfn(c, c.valuation().value() + rel);
        const std::int64_t vq = b[j - 1].valuation().value() * static_cast<std::int64_t>(q);
        b.push_back(b[j - 1].frobenius(1, vq + rel) * cj.inv());
    }
    for (std::size_t j = 0; j <= m; ++j) {
        r.b_val.push_back(b[j].valuation().value());
        if (!r.b_failure && -r.b_val[j] != geometric(q, j)) r.b_failure = j;
    }

    // beta_l to absolute precision at least -bound_l + kRelPrec, enough to
    // decide the bound whether or not the value vanishes to that precision.
    std::vector<LaurentSeries> beta{LaurentSeries(f, 0, {1}, kRelPrec)};
    for (std::size_t l = 1; l <= m; ++l) {
        const std::int64_t target = std::min(kRelPrec, extra - geometric(q, l) + kRelPrec);
        LaurentSeries s(f, target);
        for (std::size_t k = 1; k <= l; ++k) {
            const std::int64_t need = target - b[k].valuation_floor();
            s = s + b[k] * beta[l - k].frobenius(static_cast<unsigned>(k), need);
        }
        beta.push_back(-s);
    }
    for (std::size_t j = 0; j <= m; ++j) {
        r.beta_val.push_back(beta[j].valuation());
        r.beta_floor.push_back(beta[j].valuation_floor());
        if (!r.beta_failure && r.beta_floor[j] < -geometric(q, j)) r.beta_failure = j;
    }
    if (r.b_failure || r.beta_failure) r.status = ValuationReport::Status::BoundFails;
    return r;
}

}  // namespace umbra
