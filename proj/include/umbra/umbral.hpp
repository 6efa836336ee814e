#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "umbra/carlitz.hpp"
#include "umbra/linpoly.hpp"

namespace umbra {

/// Coefficients sigma_l (l >= 1) of delta_0 = sum_l sigma_l Delta^(l), where
/// Delta^(l) are the iterated Carlitz difference operators.
class SigmaSpec {
public:
    enum class Kind { Carlitz, Laguerre, Example2, Explicit };

    /// sigma_1 = 1, sigma_l = 0 for l >= 2.
    static SigmaSpec carlitz() { return SigmaSpec(Kind::Carlitz); }
    /// sigma_l = 1 for all l.
    static SigmaSpec laguerre() { return SigmaSpec(Kind::Laguerre); }
    /// sigma_l = (-1)^(l+1) / L_l.
    static SigmaSpec example2() { return SigmaSpec(Kind::Example2); }
    /// sigma_l = values[l-1], zero beyond the list.
    static SigmaSpec explicit_list(std::vector<RatFn> values);
    /// "carlitz", "laguerre" or "example2"; Errc::InvalidArgument otherwise.
    static SigmaSpec preset(std::string_view name);

    Kind kind() const noexcept { return kind_; }
    std::string name() const;
    RatFn sigma(std::size_t l, const CarlitzCache& cache) const;

private:
    explicit SigmaSpec(Kind k) : kind_(k) {}

    Kind kind_;
    std::vector<RatFn> values_;
};

/// A delta operator delta = tau^{-1} delta_0, stored through its diagonal
/// action delta_0(t^(q^n)) = c_n t^(q^n), c_n = D_n S_n, for n <= N.
///
/// Copies share state. The reduced S_n and the iterated eigenvalues E_{l,n}
/// are filled in on first use (they grow quickly with n and most callers
/// need few of them).
class DeltaOperator {
public:
    /// Throws Errc::NotDeltaOperator with index n for the first S_n = 0.
    static DeltaOperator make(const SigmaSpec& sigma, std::size_t n, std::shared_ptr<const CarlitzCache> cache);
    /// From eigenvalues c[1..N] directly (c[0] is ignored); no sigma attached.
    static DeltaOperator from_eigenvalues(std::vector<RatFn> c, std::shared_ptr<const CarlitzCache> cache);

    std::size_t order() const noexcept;
    const Field& field() const noexcept;
    const CarlitzCache& cache() const noexcept;
    std::shared_ptr<const CarlitzCache> cache_ptr() const noexcept;
    const std::optional<SigmaSpec>& sigma_spec() const noexcept;

    /// sigma_l; Errc::InvalidArgument if the operator has no sigma attached.
    RatFn sigma(std::size_t l) const;
    /// S_n = sum_{l=1}^{n} sigma_l / D_{n-l}^(q^l), 1 <= n <= N.
    const RatFn& S(std::size_t n) const;
    /// c_n = D_n S_n for 1 <= n <= N; c_0 = 0.
    const RatFn& c(std::size_t n) const;
    /// E_{0,n} = 1, E_{l,n} = 0 for n < l, else prod_{k<l} c_{n-k}^(q^k).
    RatFn E(std::size_t l, std::size_t n) const;

private:
    struct Impl;
    explicit DeltaOperator(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<Impl> impl_;
};

/// delta_0 u: level n scaled by c_n, level 0 dropped. Errc::OrderExceeded if
/// u has levels above N.
LinPoly delta0_apply(const DeltaOperator& op, const LinPoly& u);
/// tau^{-1} delta_0 u; Errc::QthRootNotExist when it leaves F_q(x).
LinPoly delta_apply(const DeltaOperator& op, const LinPoly& u);
/// delta_0^(l) = tau^l delta^l acting diagonally through E_{l,n}.
LinPoly delta0_iter(const DeltaOperator& op, std::size_t l, const LinPoly& u);
/// Delta^(l) for the Carlitz derivative by the recursion
/// (Delta^(k) u)(t) = (Delta^(k-1) u)(xt) - x^(q^(k-1)) (Delta^(k-1) u)(t).
LinPoly delta0_recursive(const CarlitzCache& cache, std::size_t l, const LinPoly& u);

/// Normalized basic sequence Q_n(t) = sum_j gamma_j^(n) t^(q^j), n <= N, with
/// P_n = D_n Q_n.
class BasicSequence {
public:
    /// gamma_0^(0) = 1, gamma_{i+1}^(n) = (gamma_i^(n-1))^q / c_{i+1},
    /// gamma_0^(n) = -sum_{j>=1} gamma_j^(n).
    static BasicSequence make(const DeltaOperator& op, std::size_t n);

    const DeltaOperator& op() const noexcept { return op_; }
    std::size_t order() const noexcept { return q_.size() - 1; }
    const Field& field() const noexcept { return op_.field(); }
    RatFn gamma(std::size_t n, std::size_t j) const;
    const LinPoly& Q(std::size_t n) const;
    LinPoly P(std::size_t n) const;

    /// Copy with gamma_j^(n) replaced by gamma_j^(n) + delta (for negative
    /// controls); nothing else is recomputed.
    BasicSequence perturbed(std::size_t n, std::size_t j, const RatFn& delta) const;

private:
    BasicSequence(DeltaOperator op, std::vector<LinPoly> q) : op_(std::move(op)), q_(std::move(q)) {}

    DeltaOperator op_;
    std::vector<LinPoly> q_;
};

using Entry = std::pair<std::size_t, std::size_t>;

struct KBinomialReport {
    bool p_form_ok = true;
    bool q_form_ok = true;
    /// First differing (s-level, t-level) entry of each form.
    std::optional<Entry> p_form_diff;
    std::optional<Entry> q_form_diff;
    bool ok() const noexcept { return p_form_ok && q_form_ok; }
};

/// P_i(st) = sum_n binom(i,n) P_n(t) P_{i-n}(s)^(q^n) and
/// Q_i(st) = sum_n Q_n(t) Q_{i-n}(s)^(q^n) as bilinear forms.
/// `perturb_n` adds 1 to binom(i, n) (negative control).
KBinomialReport k_binomial_check(const BasicSequence& seq, std::size_t i,
                                 std::optional<std::size_t> perturb_n = std::nullopt);

/// psi_l = (delta_0^(l) f)(1) = sum_j a_j E_{l,j}, l = 0..level(f).
std::vector<RatFn> taylor_expand(const BasicSequence& seq, const LinPoly& f);
/// The same coefficients by back substitution against Q_n (leading
/// coefficient gamma_n^(n)).
std::vector<RatFn> taylor_solve(const BasicSequence& seq, const LinPoly& f);
/// sum_l psi_l Q_l.
LinPoly expansion_sum(const BasicSequence& seq, const std::vector<RatFn>& psi);
/// First differing entry between f(st) and sum_l (delta_0^(l) f)(s) Q_l(t).
std::optional<Entry> taylor_bilinear_diff(const BasicSequence& seq, const LinPoly& f);

/// Invariant operator given by its diagonal action t^(q^n) -> c'_n t^(q^n).
struct InvariantOperator {
    std::vector<RatFn> cprime;

    LinPoly apply(const LinPoly& u) const;
};

/// sigma'_l = (T Q_l)(1), l = 0..N, so that T = sum_l sigma'_l delta_0^(l).
std::vector<RatFn> invariant_expand(const BasicSequence& seq, const InvariantOperator& t);
/// c'_n = sum_{l <= n} sigma'_l E_{l,n} for n = 0..N.
std::vector<RatFn> invariant_reconstruct(const DeltaOperator& op, const std::vector<RatFn>& sigma_prime);

/// Coefficients a_i with u = sum_i a_i f_i (normalized Carlitz basis).
std::vector<RatFn> carlitz_expand(const CarlitzCache& cache, const LinPoly& u);
/// max_i(-v(a_i)) over the Carlitz expansion: ||u|| = q^e. nullopt for u = 0.
std::optional<std::int64_t> sup_norm(const CarlitzCache& cache, const LinPoly& u);
/// max_i(-v(a_i)) for a coefficient vector; nullopt if all are zero.
std::optional<std::int64_t> max_neg_valuation(const std::vector<RatFn>& a);

struct OrthonormalReport {
    enum class Status { Holds, HypothesisNotMet, ConclusionFails };
    Status status = Status::Holds;
    /// First l with v(sigma_1) != 0 or v(sigma_l) < 0.
    std::optional<std::size_t> hypothesis_index;
    /// Norm exponents of Q_0..Q_N.
    std::vector<std::optional<std::int64_t>> q_norms;
    /// First n with ||Q_n|| != 1 or a negative-valuation Carlitz coefficient.
    std::optional<std::size_t> norm_failure;
    std::size_t samples = 0;
    /// First random sample where ||f|| != max |psi_n|.
    std::optional<std::size_t> sample_failure;
};

/// Checks the hypothesis |sigma_1| = 1, |sigma_l| <= 1 (l <= N), then
/// ||Q_n|| = 1 for n <= N and ||f|| = max_n |psi_n| on `samples` seeded
/// random f of level <= N.
OrthonormalReport orthonormal_check(const BasicSequence& seq, std::uint64_t seed, std::size_t samples);

}  // namespace umbra
