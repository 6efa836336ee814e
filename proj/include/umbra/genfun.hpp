#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "umbra/umbral.hpp"

namespace umbra {

/// Truncated F_q-linear power series sum_{j<=M} b_j t^(q^j), known modulo
/// t^(q^(M+1)). Unlike LinPoly it keeps its order when top coefficients vanish.
class FormalLinSeries {
public:
    FormalLinSeries(Field field, std::vector<RatFn> coeffs);
    /// t + O(t^(q^(M+1))).
    static FormalLinSeries identity(const Field& f, std::size_t order);
    /// u truncated at `order`.
    static FormalLinSeries from_linpoly(const LinPoly& u, std::size_t order);

    const Field& field() const noexcept { return field_; }
    std::size_t order() const noexcept { return b_.size() - 1; }
    const std::vector<RatFn>& coeffs() const noexcept { return b_; }
    const RatFn& coeff(std::size_t j) const { return b_.at(j); }
    void set(std::size_t j, RatFn v) { b_.at(j) = std::move(v); }
    FormalLinSeries truncate(std::size_t order) const;
    LinPoly to_linpoly() const { return LinPoly(field_, b_); }

    friend bool operator==(const FormalLinSeries& a, const FormalLinSeries& b) {
        return a.field_ == b.field_ && a.b_ == b.b_;
    }

private:
    Field field_;
    std::vector<RatFn> b_;
};

/// e_delta: b_0 = 1, b_{j+1} = b_j^q / c_{j+1}. Needs M <= op.order().
FormalLinSeries exp_series(const DeltaOperator& op, std::size_t m);
/// Composition inverse of a series with b_0 = 1:
/// beta_0 = 1, beta_l = -sum_{m=1}^{l} b_m beta_{l-m}^(q^m).
FormalLinSeries compositional_inverse(const FormalLinSeries& e);
/// log_delta, the composition inverse of exp_series(op, m).
FormalLinSeries log_series(const DeltaOperator& op, std::size_t m);
/// u o v to order min(M_u, M_v).
FormalLinSeries series_compose(const FormalLinSeries& u, const FormalLinSeries& v);

/// Level where `s` first differs from the identity series; nullopt if equal.
std::optional<std::size_t> identity_mismatch(const FormalLinSeries& s);

/// delta_0 s = tau s, compared level by level for 1..M (level 0 of both
/// sides is zero). Holds for s = e_delta.
struct FixedPointReport {
    bool ok = true;
    std::optional<std::size_t> first_failure;
};
FixedPointReport delta_fixed_point_check(const DeltaOperator& op, const FormalLinSeries& s);

/// e_delta(t log_delta(z)) against sum_{n<=M} Q_n(t) z^(q^n) as bilinear
/// forms in (t, z): row j is the t-level, column k the z-level, entry
/// sum_{i} b_j beta_i^(q^j) over j + i = k on the left and gamma_j^(k) on
/// the right. Columns above M are discarded.
struct GeneratingReport {
    bool ok = true;
    std::optional<Entry> first_difference;
    BiLinPoly lhs;
    BiLinPoly rhs;
};
GeneratingReport generating_identity_check(const DeltaOperator& op, const BasicSequence& seq, std::size_t m);
/// Same with explicit series, for negative controls.
GeneratingReport generating_identity_check(const FormalLinSeries& e, const FormalLinSeries& log,
                                           const BasicSequence& seq);

/// Valuations of b_j and beta_j, j <= M, against the bounds
/// -v(b_j) = (q^j - 1)/(q - 1) and -v(beta_j) <= (q^j - 1)/(q - 1).
///
/// Values are computed as Laurent series at x = 0 carrying enough relative
/// precision that every reported valuation is certified: an exact valuation
/// when the leading term lies inside the precision, otherwise a lower bound
/// at least as strong as the one being checked.
struct ValuationReport {
    enum class Status { Holds, HypothesisNotMet, BoundFails };
    Status status = Status::Holds;
    /// First l with v(sigma_1) != 0 or v(sigma_l) < 0.
    std::optional<std::size_t> hypothesis_index;
    /// Exact v(b_j).
    std::vector<std::int64_t> b_val;
    /// v(beta_j), or nullopt when beta_j is zero to the working precision.
    std::vector<std::optional<std::int64_t>> beta_val;
    /// Lower bound certified for v(beta_j) (its valuation or the precision).
    std::vector<std::int64_t> beta_floor;
    std::optional<std::size_t> b_failure;
    std::optional<std::size_t> beta_failure;
};
ValuationReport valuation_profile(const DeltaOperator& op, std::size_t m);

}  // namespace umbra
