#include "umbra/umbral.hpp"

#include <algorithm>
#include <mutex>

#include "umbra/error.hpp"
#include "umbra/random.hpp"

namespace umbra {

SigmaSpec SigmaSpec::explicit_list(std::vector<RatFn> values) {
    SigmaSpec s(Kind::Explicit);
    s.values_ = std::move(values);
    return s;
}

SigmaSpec SigmaSpec::preset(std::string_view name) {
    if (name == "carlitz") return carlitz();
    if (name == "laguerre") return laguerre();
    if (name == "example2") return example2();
    throw Error(Errc::InvalidArgument, "unknown preset '" + std::string(name) + "'");
}

std::string SigmaSpec::name() const {
    switch (kind_) {
        case Kind::Carlitz: return "carlitz";
        case Kind::Laguerre: return "laguerre";
        case Kind::Example2: return "example2";
        case Kind::Explicit: return "explicit";
    }
    return "explicit";
}

RatFn SigmaSpec::sigma(std::size_t l, const CarlitzCache& cache) const {
    const Field& f = cache.field();
    if (l == 0) return RatFn(f);
    switch (kind_) {
        case Kind::Carlitz: return l == 1 ? RatFn::one(f) : RatFn(f);
        case Kind::Laguerre: return RatFn::one(f);
        case Kind::Example2: {
            const RatFn r(Poly::constant(f, 1), cache.L(l));
            return l % 2 == 1 ? r : -r;
        }
        case Kind::Explicit: {
            if (l > values_.size()) return RatFn(f);
            const RatFn& v = values_[l - 1];
            if (!(v.field() == f)) throw Error(Errc::FieldMismatch, "sigma value over another field");
            return v;
        }
    }
    return RatFn(f);
}

struct DeltaOperator::Impl {
    std::shared_ptr<const CarlitzCache> cache;
    std::optional<SigmaSpec> sigma;
    std::vector<RatFn> c;  // c[0] = 0

    mutable std::mutex mu;
    // S_n = c_n / D_n, reduced on first use: the gcd is the expensive part.
    mutable std::vector<std::optional<RatFn>> s;
    mutable std::vector<std::vector<std::optional<RatFn>>> e;  // e[l][n], l >= 1

    // Assumes mu is held.
    const RatFn& e_locked(std::size_t l, std::size_t n) const {
        if (e.size() <= l) e.resize(l + 1);
        if (e[l].size() <= n) e[l].resize(n + 1);
        if (!e[l][n]) {
            RatFn v = l == 1 ? c[n] : c[n] * e_locked(l - 1, n - 1).frobenius(1);
            e[l][n] = std::move(v);
        }
        return *e[l][n];
    }
};

namespace {

void check_cache(const std::shared_ptr<const CarlitzCache>& cache, std::size_t n) {
    if (!cache) throw Error(Errc::InvalidArgument, "missing Carlitz cache");
    if (n > cache->order())
        throw Error(Errc::OrderExceeded, "operator order " + std::to_string(n) + " exceeds the Carlitz cache order");
}

}  // namespace

DeltaOperator DeltaOperator::make(const SigmaSpec& sigma, std::size_t n, std::shared_ptr<const CarlitzCache> cache) {
    check_cache(cache, n);
    const CarlitzCache& cc = *cache;
    const Field& f = cc.field();
    std::vector<RatFn> sig{RatFn(f)};
    for (std::size_t l = 1; l <= n; ++l) sig.push_back(sigma.sigma(l, cc));

    std::vector<RatFn> c{RatFn(f)};
    for (std::size_t m = 1; m <= n; ++m) {
        // c_m = sum_l sigma_l D_m / D_{m-l}^(q^l); the ratio for l is the
        // one for l-1 times [m-l+1]^(q^(l-1)).
        Poly ratio = Poly::constant(f, 1);
        RatFn sum(f);
        Poly poly_part(f);
        for (std::size_t l = 1; l <= m; ++l) {
            ratio = ratio * Poly::binomial(f, cc.qpow(m), cc.qpow(l - 1));
            const RatFn& s = sig[l];
            if (s.is_zero()) continue;
            if (s.is_polynomial())
                poly_part += s.num() * ratio;
            else
                sum += s * RatFn(ratio);
        }
        c.push_back(sum + RatFn(std::move(poly_part)));
    }
    DeltaOperator op = from_eigenvalues(std::move(c), std::move(cache));
    op.impl_->sigma = sigma;
    return op;
}

DeltaOperator DeltaOperator::from_eigenvalues(std::vector<RatFn> c, std::shared_ptr<const CarlitzCache> cache) {
    if (c.empty()) throw Error(Errc::InvalidArgument, "eigenvalue list is empty");
    const std::size_t n = c.size() - 1;
    check_cache(cache, n);
    const Field& f = cache->field();
    auto impl = std::make_shared<Impl>();
    c[0] = RatFn(f);
    for (std::size_t m = 1; m <= n; ++m) {
        if (!(c[m].field() == f)) throw Error(Errc::FieldMismatch, "eigenvalue over another field");
        if (c[m].is_zero()) throw Error(Errc::NotDeltaOperator, "S_" + std::to_string(m) + " = 0", m);
    }
    impl->s.resize(n + 1);
    impl->c = std::move(c);
    impl->cache = std::move(cache);
    return DeltaOperator(std::move(impl));
}

std::size_t DeltaOperator::order() const noexcept { return impl_->c.size() - 1; }
const Field& DeltaOperator::field() const noexcept { return impl_->cache->field(); }
const CarlitzCache& DeltaOperator::cache() const noexcept { return *impl_->cache; }
std::shared_ptr<const CarlitzCache> DeltaOperator::cache_ptr() const noexcept { return impl_->cache; }
const std::optional<SigmaSpec>& DeltaOperator::sigma_spec() const noexcept { return impl_->sigma; }

RatFn DeltaOperator::sigma(std::size_t l) const {
    if (!impl_->sigma) throw Error(Errc::InvalidArgument, "operator was built from eigenvalues, no sigma attached");
    return impl_->sigma->sigma(l, *impl_->cache);
}

const RatFn& DeltaOperator::S(std::size_t n) const {
    if (n == 0 || n > order()) throw Error(Errc::OrderExceeded, "S index " + std::to_string(n) + " out of range");
    std::lock_guard<std::mutex> lock(impl_->mu);
    auto& slot = impl_->s[n];
    if (!slot) slot = impl_->c[n] / RatFn(impl_->cache->D(n));
    return *slot;
}

const RatFn& DeltaOperator::c(std::size_t n) const {
    if (n > order()) throw Error(Errc::OrderExceeded, "c index " + std::to_string(n) + " out of range");
    return impl_->c[n];
}

RatFn DeltaOperator::E(std::size_t l, std::size_t n) const {
    if (n > order()) throw Error(Errc::OrderExceeded, "E index " + std::to_string(n) + " out of range");
    if (l == 0) return RatFn::one(field());
    if (n < l) return RatFn(field());
    std::lock_guard<std::mutex> lock(impl_->mu);
    return impl_->e_locked(l, n);
}

namespace {

void check_level(const LinPoly& u, std::size_t n) {
    if (u.size() > n + 1)
        throw Error(Errc::OrderExceeded,
                    "input has level " + std::to_string(u.size() - 1) + " above the order " + std::to_string(n));
}

}  // namespace

LinPoly delta0_apply(const DeltaOperator& op, const LinPoly& u) {
    check_level(u, op.order());
    std::vector<RatFn> out(u.coeffs().begin(), u.coeffs().end());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = n == 0 ? RatFn(op.field()) : out[n] * op.c(n);
    return LinPoly(op.field(), std::move(out));
}

LinPoly delta_apply(const DeltaOperator& op, const LinPoly& u) { return tau_power(delta0_apply(op, u), -1); }

LinPoly delta0_iter(const DeltaOperator& op, std::size_t l, const LinPoly& u) {
    check_level(u, op.order());
    if (l > op.order()) throw Error(Errc::OrderExceeded, "iteration count exceeds the operator order");
    std::vector<RatFn> out(u.coeffs().begin(), u.coeffs().end());
    for (std::size_t n = 0; n < out.size(); ++n)
        if (!out[n].is_zero()) out[n] *= op.E(l, n);
    return LinPoly(op.field(), std::move(out));
}

LinPoly delta0_recursive(const CarlitzCache& cache, std::size_t l, const LinPoly& u) {
    const Field& f = cache.field();
    const RatFn x = RatFn::x(f);
    LinPoly v = u;
    for (std::size_t k = 1; k <= l; ++k) v = rho(v, x) - v.scale(x.frobenius(static_cast<unsigned>(k - 1)));
    return v;
}

BasicSequence BasicSequence::make(const DeltaOperator& op, std::size_t n) {
    if (n > op.order()) throw Error(Errc::OrderExceeded, "sequence order exceeds the operator order");
    const Field& f = op.field();
    std::vector<LinPoly> q{LinPoly::identity(f)};
    std::vector<RatFn> prev{RatFn::one(f)};
    for (std::size_t m = 1; m <= n; ++m) {
        std::vector<RatFn> row(m + 1, RatFn(f));
        RatFn sum(f);
        for (std::size_t i = 0; i < m; ++i) {
            row[i + 1] = prev[i].frobenius(1) / op.c(i + 1);
            sum += row[i + 1];
        }
        row[0] = -sum;
        q.emplace_back(f, row);
        prev = std::move(row);
    }
    return BasicSequence(op, std::move(q));
}

RatFn BasicSequence::gamma(std::size_t n, std::size_t j) const { return Q(n).coeff(j); }

const LinPoly& BasicSequence::Q(std::size_t n) const {
    if (n >= q_.size()) throw Error(Errc::OrderExceeded, "Q index " + std::to_string(n) + " out of range");
    return q_[n];
}

LinPoly BasicSequence::P(std::size_t n) const { return Q(n).scale(RatFn(op_.cache().D(n))); }

BasicSequence BasicSequence::perturbed(std::size_t n, std::size_t j, const RatFn& delta) const {
    BasicSequence copy = *this;
    LinPoly& u = copy.q_.at(n);
    u.set(j, u.coeff(j) + delta);
    return copy;
}

KBinomialReport k_binomial_check(const BasicSequence& seq, std::size_t i, std::optional<std::size_t> perturb_n) {
    const Field& f = seq.field();
    const CarlitzCache& cache = seq.op().cache();
    KBinomialReport report;

    BiLinPoly rhs_p(f), rhs_q(f);
    std::vector<LinPoly> p;
    for (std::size_t n = 0; n <= i; ++n) p.push_back(seq.P(n));
    for (std::size_t n = 0; n <= i; ++n) {
        RatFn binom(k_binomial(cache, i, n));
        if (perturb_n && *perturb_n == n) binom += RatFn::one(f);
        bilin_accumulate_into(rhs_p, {binom, p[n], p[i - n], static_cast<unsigned>(n)});
        bilin_accumulate_into(rhs_q, {RatFn::one(f), seq.Q(n), seq.Q(i - n), static_cast<unsigned>(n)});
    }
    report.p_form_diff = first_difference(subst_st(p[i]), rhs_p);
    report.q_form_diff = first_difference(subst_st(seq.Q(i)), rhs_q);
    report.p_form_ok = !report.p_form_diff;
    report.q_form_ok = !report.q_form_diff;
    return report;
}

std::vector<RatFn> taylor_expand(const BasicSequence& seq, const LinPoly& f) {
    check_level(f, seq.order());
    const DeltaOperator& op = seq.op();
    std::vector<RatFn> psi;
    for (std::size_t l = 0; l < f.size(); ++l) {
        RatFn sum(f.field());
        for (std::size_t j = l; j < f.size(); ++j)
            if (!f.coeffs()[j].is_zero()) sum += f.coeffs()[j] * op.E(l, j);
        psi.push_back(std::move(sum));
    }
    return psi;
}

std::vector<RatFn> taylor_solve(const BasicSequence& seq, const LinPoly& f) {
    check_level(f, seq.order());
    std::vector<RatFn> psi(f.size(), RatFn(f.field()));
    LinPoly r = f;
    for (std::size_t n = f.size(); n-- > 0;) {
        const RatFn top = r.coeff(n);
        if (top.is_zero()) continue;
        psi[n] = top / seq.gamma(n, n);
        r -= seq.Q(n).scale(psi[n]);
    }
    if (!r.is_zero()) throw std::logic_error("back substitution left a remainder");
    return psi;
}

LinPoly expansion_sum(const BasicSequence& seq, const std::vector<RatFn>& psi) {
    LinPoly out(seq.field());
    for (std::size_t l = 0; l < psi.size(); ++l)
        if (!psi[l].is_zero()) out += seq.Q(l).scale(psi[l]);
    return out;
}

std::optional<Entry> taylor_bilinear_diff(const BasicSequence& seq, const LinPoly& f) {
    BiLinPoly rhs(seq.field());
    for (std::size_t l = 0; l < f.size(); ++l)
        bilin_accumulate_into(rhs, {RatFn::one(seq.field()), seq.Q(l), delta0_iter(seq.op(), l, f), 0});
    return first_difference(subst_st(f), rhs);
}

LinPoly InvariantOperator::apply(const LinPoly& u) const {
    if (u.size() > cprime.size()) throw Error(Errc::OrderExceeded, "input level above the operator order");
    std::vector<RatFn> out(u.coeffs().begin(), u.coeffs().end());
    for (std::size_t n = 0; n < out.size(); ++n)
        if (!out[n].is_zero()) out[n] *= cprime[n];
    return LinPoly(u.field(), std::move(out));
}

std::vector<RatFn> invariant_expand(const BasicSequence& seq, const InvariantOperator& t) {
    if (t.cprime.empty()) throw Error(Errc::InvalidArgument, "empty invariant operator");
    const std::size_t n = std::min(seq.order(), t.cprime.size() - 1);
    const RatFn one = RatFn::one(seq.field());
    std::vector<RatFn> out;
    for (std::size_t l = 0; l <= n; ++l) out.push_back(lin_eval(t.apply(seq.Q(l)), one));
    return out;
}

std::vector<RatFn> invariant_reconstruct(const DeltaOperator& op, const std::vector<RatFn>& sigma_prime) {
    std::vector<RatFn> out;
    for (std::size_t n = 0; n < sigma_prime.size(); ++n) {
        RatFn sum(op.field());
        for (std::size_t l = 0; l <= n; ++l)
            if (!sigma_prime[l].is_zero()) sum += sigma_prime[l] * op.E(l, n);
        out.push_back(std::move(sum));
    }
    return out;
}

std::vector<RatFn> carlitz_expand(const CarlitzCache& cache, const LinPoly& u) {
    if (u.size() > cache.order() + 1) throw Error(Errc::OrderExceeded, "input level above the Carlitz cache order");
    std::vector<RatFn> a(u.size(), RatFn(u.field()));
    LinPoly r = u;
    for (std::size_t n = u.size(); n-- > 0;) {
        const RatFn top = r.coeff(n);
        if (top.is_zero()) continue;
        a[n] = top * RatFn(cache.D(n));
        r -= carlitz_f(cache, n).scale(a[n]);
    }
    if (!r.is_zero()) throw std::logic_error("Carlitz back substitution left a remainder");
    return a;
}

std::optional<std::int64_t> max_neg_valuation(const std::vector<RatFn>& a) {
    std::optional<std::int64_t> best;
    for (const RatFn& v : a) {
        if (v.is_zero()) continue;
        const std::int64_t e = -valuation(v).value();
        if (!best || e > *best) best = e;
    }
    return best;
}

std::optional<std::int64_t> sup_norm(const CarlitzCache& cache, const LinPoly& u) {
    return max_neg_valuation(carlitz_expand(cache, u));
}

OrthonormalReport orthonormal_check(const BasicSequence& seq, std::uint64_t seed, std::size_t samples) {
    const DeltaOperator& op = seq.op();
    const std::size_t n = seq.order();
    OrthonormalReport rep;
    for (std::size_t l = 1; l <= std::max<std::size_t>(n, 1); ++l) {
        const ValExp v = valuation(op.sigma(l));
        const bool ok = l == 1 ? v == ValExp(0) : v >= ValExp(0);
        if (!ok) {
            rep.status = OrthonormalReport::Status::HypothesisNotMet;
            rep.hypothesis_index = l;
            return rep;
        }
    }
    const CarlitzCache& cache = op.cache();
    for (std::size_t m = 0; m <= n; ++m) {
        const auto norm = sup_norm(cache, seq.Q(m));
        rep.q_norms.push_back(norm);
        if (norm != std::optional<std::int64_t>(0) && !rep.norm_failure) rep.norm_failure = m;
    }
    Rng rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        const LinPoly f = rng.linpoly(seq.field(), rng.below(n + 1), 3, 2);
        ++rep.samples;
        if (sup_norm(cache, f) != max_neg_valuation(taylor_expand(seq, f)) && !rep.sample_failure)
            rep.sample_failure = s;
    }
    if (rep.norm_failure || rep.sample_failure) rep.status = OrthonormalReport::Status::ConclusionFails;
    return rep;
}

}  // namespace umbra
