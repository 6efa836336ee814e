#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "umbra/error.hpp"
#include "umbra/expr.hpp"
#include "umbra/genfun.hpp"
#include "umbra/laurent.hpp"
#include "umbra/random.hpp"

namespace umbra::cli {

namespace {

using Json = nlohmann::ordered_json;

const char* const kSuites[] = {"kbinomial", "taylor", "gekeler", "orthonormal", "genfun", "module"};

Json coeffs_json(const std::vector<RatFn>& a) {
    Json out = Json::array();
    for (const RatFn& c : a) out.push_back(to_string(c));
    return out;
}

Json coeffs_json(const LinPoly& u) { return coeffs_json(u.coeffs()); }

Json entry_json(const Entry& e) { return Json{{"row", e.first}, {"col", e.second}}; }

template <class T>
Json opt_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

std::optional<std::size_t> first_level_diff(const std::vector<RatFn>& a, const std::vector<RatFn>& b, const Field& f) {
    const std::size_t n = std::max(a.size(), b.size());
    for (std::size_t j = 0; j < n; ++j) {
        const RatFn x = j < a.size() ? a[j] : RatFn(f);
        const RatFn y = j < b.size() ? b[j] : RatFn(f);
        if (x != y) return j;
    }
    return std::nullopt;
}

std::optional<std::size_t> first_level_diff(const LinPoly& a, const LinPoly& b) {
    return first_level_diff(a.coeffs(), b.coeffs(), a.field());
}

// Every polynomial of degree <= d, in base-q digit order (zero first).
std::vector<Poly> polys_up_to(const Field& f, std::size_t d) {
    std::size_t count = 1;
    for (std::size_t i = 0; i <= d; ++i) count *= f.q();
    std::vector<Poly> out;
    for (std::size_t code = 0; code < count; ++code) {
        std::vector<Field::Rep> digits;
        for (std::size_t c = code, i = 0; i <= d; ++i, c /= f.q()) digits.push_back(static_cast<Field::Rep>(c % f.q()));
        out.emplace_back(f, std::move(digits));
    }
    return out;
}

// Records of one run, in the order the checks were made.
class Report {
public:
    void add(const std::string& suite, const std::string& identity, Json params, bool ok, Json where = nullptr) {
        Json rec{{"suite", suite}, {"identity", identity}, {"params", std::move(params)}, {"ok", ok}};
        if (!ok) rec["counterexample"] = std::move(where);
        checks_.push_back(std::move(rec));
        ++(ok ? passed_ : failed_);
    }
    void note(const std::string& suite, const std::string& identity, Json params, const std::string& status) {
        checks_.push_back({{"suite", suite}, {"identity", identity}, {"params", std::move(params)}, {"ok", true},
                           {"status", status}});
        ++passed_;
    }
    bool ok() const { return failed_ == 0; }
    Json checks() const { return checks_; }
    Json summary() const { return {{"passed", passed_}, {"failed", failed_}}; }

private:
    Json checks_ = Json::array();
    std::size_t passed_ = 0;
    std::size_t failed_ = 0;
};

struct Context {
    RunConfig cfg;
    Field field;
    SigmaSpec sigma;
    std::shared_ptr<const CarlitzCache> cache;

    std::string sigma_name() const { return cfg.sigma_file ? "explicit" : sigma.name(); }

    DeltaOperator op(std::size_t order) const { return DeltaOperator::make(sigma, order, cache); }
    DeltaOperator carlitz(std::size_t order) const { return DeltaOperator::make(SigmaSpec::carlitz(), order, cache); }
};

Field make_field(const RunConfig& cfg) {
    Field f = Field::of_order(cfg.q);
    if (cfg.nu && *cfg.nu != f.nu())
        throw Error(Errc::InvalidArgument, "--nu " + std::to_string(*cfg.nu) + " does not match q = " +
                                               std::to_string(cfg.q) + " = " + std::to_string(f.p()) + "^" +
                                               std::to_string(f.nu()));
    return f;
}

// A sigma file is a JSON list of rational-function strings sigma_1, sigma_2,
// ... or an object holding that list under "sigma".
SigmaSpec load_sigma(const RunConfig& cfg, const Field& f) {
    if (!cfg.sigma_file) return SigmaSpec::preset(cfg.preset);
    std::ifstream in(*cfg.sigma_file);
    if (!in) throw Error(Errc::InvalidArgument, "cannot read sigma file '" + *cfg.sigma_file + "'");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::InvalidArgument, std::string("sigma file: ") + e.what());
    }
    const Json list = doc.is_object() && doc.contains("sigma") ? doc["sigma"] : doc;
    if (!list.is_array()) throw Error(Errc::InvalidArgument, "sigma file must hold a list of strings");
    std::vector<RatFn> values;
    for (const Json& v : list) {
        if (!v.is_string()) throw Error(Errc::InvalidArgument, "sigma values must be strings");
        values.push_back(parse_ratfn(v.get<std::string>(), f));
    }
    return SigmaSpec::explicit_list(std::move(values));
}

// Levels needed for the analytic expansion check at precision 12: three
// terms past the precision for lam = x^2 (q = 2) or lam = x.
std::size_t point_order(std::uint32_t q) { return q == 2 ? 6 : q <= 4 ? 5 : 4; }

// Degree bound for the exhaustive Carlitz module checks.
std::size_t module_degree(std::uint32_t q) { return q <= 3 ? 2 : 1; }

Context make_context(const RunConfig& cfg, std::size_t cache_order) {
    Field f = make_field(cfg);
    SigmaSpec s = load_sigma(cfg, f);
    auto cache = std::make_shared<const CarlitzCache>(f, cache_order);
    return Context{cfg, std::move(f), std::move(s), std::move(cache)};
}

Json config_json(const Context& c) {
    Json j{{"q", c.field.q()}, {"p", c.field.p()}, {"nu", c.field.nu()}};
    if (c.cfg.sigma_file)
        j["sigma_file"] = *c.cfg.sigma_file;
    else
        j["preset"] = c.sigma.name();
    j["n"] = c.cfg.n;
    j["terms"] = c.cfg.terms;
    j["seed"] = c.cfg.seed;
    j["samples"] = c.cfg.samples;
    j["perturb"] = c.cfg.perturb;
    return j;
}

// ---- verification suites ----

void suite_kbinomial(const Context& c, Report& r) {
    const std::size_t n = c.cfg.n;
    const BasicSequence seq = BasicSequence::make(c.op(n), n);
    for (std::size_t i = 0; i <= n; ++i) {
        std::optional<std::size_t> bump;
        if (c.cfg.perturb && i == n) bump = n / 2;
        const KBinomialReport k = k_binomial_check(seq, i, bump);
        const Json params{{"preset", c.sigma_name()}, {"i", i}};
        r.add("kbinomial", "P_i(st) = sum_n binom(i,n) P_n(t) P_{i-n}(s)^(q^n)", params, k.p_form_ok,
              k.p_form_diff ? entry_json(*k.p_form_diff) : Json(nullptr));
        r.add("kbinomial", "Q_i(st) = sum_n Q_n(t) Q_{i-n}(s)^(q^n)", params, k.q_form_ok,
              k.q_form_diff ? entry_json(*k.q_form_diff) : Json(nullptr));
    }
    const CarlitzCache& cc = *c.cache;
    std::vector<LinPoly> e;
    for (std::size_t i = 0; i <= n; ++i) e.push_back(carlitz_e(cc, i));
    for (std::size_t i = 0; i <= n; ++i) {
        BiLinPoly rhs(c.field);
        for (std::size_t m = 0; m <= i; ++m)
            bilin_accumulate_into(rhs, {RatFn(k_binomial(cc, i, m)), e[m], e[i - m], static_cast<unsigned>(m)});
        const auto diff = first_difference(subst_st(e[i]), rhs);
        r.add("kbinomial", "e_i(st) = sum_n [i,n] e_n(t) e_{i-n}(s)^(q^n)", {{"i", i}}, !diff,
              diff ? entry_json(*diff) : Json(nullptr));
    }
}

void suite_taylor(const Context& c, Report& r) {
    const std::size_t n = c.cfg.n;
    const Field& f = c.field;
    const DeltaOperator op = c.op(n);
    BasicSequence seq = BasicSequence::make(op, n);
    if (c.cfg.perturb) seq = seq.perturbed(n, n > 0 ? 1 : 0, RatFn::one(f));
    const std::string preset = c.sigma_name();

    // delta_0^(l) P_j = (D_j / D_{j-l}^(q^l)) P_{j-l}^(q^l)
    for (std::size_t j = 0; j <= n; ++j)
        for (std::size_t l = 0; l <= j; ++l) {
            const LinPoly lhs = delta0_iter(op, l, seq.P(j));
            const LinPoly rhs =
                tau_power(seq.P(j - l), static_cast<int>(l)).scale(RatFn(c.cache->factorial_ratio(j, l)));
            const auto d = first_level_diff(lhs, rhs);
            r.add("taylor", "delta_0^(l) P_j = (D_j / D_{j-l}^(q^l)) P_{j-l}^(q^l)",
                  {{"preset", preset}, {"j", j}, {"l", l}}, !d, Json{{"level", opt_json(d)}});
        }

    // Diagonal iterated Carlitz differences against the recursion.
    const DeltaOperator car = c.carlitz(n);
    Rng rng(c.cfg.seed);
    std::vector<std::pair<std::string, LinPoly>> inputs;
    for (std::size_t k = 0; k <= n; ++k)
        inputs.emplace_back("t^(q^" + std::to_string(k) + ")", LinPoly::monomial(RatFn::one(f), k));
    for (int i = 0; i < 5; ++i) inputs.emplace_back("random " + std::to_string(i), rng.linpoly(f, n, 3, 2));
    for (std::size_t l = 1; l <= std::min<std::size_t>(4, n); ++l)
        for (const auto& [name, u] : inputs) {
            const auto d = first_level_diff(delta0_iter(car, l, u), delta0_recursive(*c.cache, l, u));
            r.add("taylor", "diagonal Delta^(l) = recursive Delta^(l)", {{"l", l}, {"input", name}}, !d,
                  Json{{"level", opt_json(d)}});
        }

    // psi of Q_m is the m-th unit vector.
    for (std::size_t m = 0; m <= n; ++m) {
        std::vector<RatFn> unit(m + 1, RatFn(f));
        unit[m] = RatFn::one(f);
        const auto d = first_level_diff(taylor_expand(seq, seq.Q(m)), unit, f);
        r.add("taylor", "expansion of Q_m is the m-th unit vector", {{"preset", preset}, {"m", m}}, !d,
              Json{{"index", opt_json(d)}});
    }

    // Random f: operator route, triangular solve and reconstruction.
    for (std::size_t s = 0; s < c.cfg.samples; ++s) {
        const LinPoly g = rng.linpoly(f, rng.below(n + 1), 3, 2);
        const std::vector<RatFn> a = taylor_expand(seq, g);
        const auto d = first_level_diff(a, taylor_solve(seq, g), f);
        const auto back = first_level_diff(expansion_sum(seq, a), g);
        Json params{{"preset", preset}, {"sample", s}};
        r.add("taylor", "psi by operators = psi by triangular solve", params, !d, Json{{"index", opt_json(d)}});
        r.add("taylor", "f = sum_l psi_l Q_l", params, !back, Json{{"level", opt_json(back)}});
        if (s < 3) {
            const auto bd = taylor_bilinear_diff(seq, g);
            r.add("taylor", "f(st) = sum_l (delta_0^(l) f)(s) Q_l(t)", params, !bd,
                  bd ? entry_json(*bd) : Json(nullptr));
        }
    }
}

void suite_reciprocal_factorials(const Context& c, Report& r) {
    const std::size_t n = c.cfg.n;
    for (std::size_t h = 1; h <= n; ++h) {
        std::optional<std::size_t> bump;
        if (c.cfg.perturb && h == n) bump = h / 2;
        const Poly res = reciprocal_factorial_residual(*c.cache, h, bump);
        r.add("gekeler", "sum_j (-1)^j / (L_j D_{h-j}^(q^j)) = (-1)^(h+1) / L_h", {{"h", h}}, res.is_zero(),
              Json{{"h", h}, {"residual_degree", opt_json(res.degree())}});
    }
}

void suite_orthonormal(const Context& c, Report& r) {
    const std::size_t n = c.cfg.n;
    BasicSequence seq = BasicSequence::make(c.op(n), n);
    if (c.cfg.perturb && n > 0) seq = seq.perturbed(n, 1, RatFn(Poly::constant(c.field, 1), Poly::x(c.field)));
    const OrthonormalReport o = orthonormal_check(seq, c.cfg.seed, c.cfg.samples);
    const std::string preset = c.sigma_name();
    if (o.status == OrthonormalReport::Status::HypothesisNotMet) {
        r.note("orthonormal", "|sigma_1| = 1 and |sigma_l| <= 1", {{"preset", preset}, {"index", *o.hypothesis_index}},
               "hypothesis_not_met");
        return;
    }
    for (std::size_t k = 0; k < o.q_norms.size(); ++k) {
        const bool ok = o.q_norms[k] == std::optional<std::int64_t>(0);
        r.add("orthonormal", "||Q_n|| = 1 with integral Carlitz coefficients", {{"preset", preset}, {"n", k}}, ok,
              Json{{"n", k}, {"norm_exponent", opt_json(o.q_norms[k])}});
    }
    r.add("orthonormal", "||f|| = max_n |psi_n|", {{"preset", preset}, {"samples", o.samples}}, !o.sample_failure,
          Json{{"sample", opt_json(o.sample_failure)}});
}

void suite_genfun(const Context& c, Report& r) {
    const std::size_t m = c.cfg.terms;
    const Field& f = c.field;
    const DeltaOperator op = c.op(std::max(m, point_order(f.q())));
    const FormalLinSeries e = exp_series(op, m);
    FormalLinSeries l = compositional_inverse(e);
    if (c.cfg.perturb) {
        const std::size_t j = std::min<std::size_t>(1, m);
        l.set(j, l.coeff(j) + RatFn::one(f));
    }
    const std::string preset = c.sigma_name();
    const Json params{{"preset", preset}, {"terms", m}};

    if (!c.cfg.sigma_file && c.sigma.kind() == SigmaSpec::Kind::Carlitz) {
        for (std::size_t j = 0; j <= m; ++j) {
            const RatFn b(Poly::constant(f, 1), c.cache->D(j));
            const RatFn beta = RatFn(Poly::constant(f, 1), c.cache->L(j));
            r.add("genfun", "b_j = 1/D_j", {{"j", j}}, e.coeff(j) == b, Json{{"j", j}});
            r.add("genfun", "beta_j = (-1)^j / L_j", {{"j", j}}, l.coeff(j) == (j % 2 == 0 ? beta : -beta),
                  Json{{"j", j}});
        }
    }
    const auto el = identity_mismatch(series_compose(e, l));
    const auto le = identity_mismatch(series_compose(l, e));
    r.add("genfun", "e o log = identity", params, !el, Json{{"level", opt_json(el)}});
    r.add("genfun", "log o e = identity", params, !le, Json{{"level", opt_json(le)}});
    const FixedPointReport fp = delta_fixed_point_check(op, e);
    r.add("genfun", "delta_0 e = e^q", params, fp.ok, Json{{"level", opt_json(fp.first_failure)}});
    const BasicSequence seq = BasicSequence::make(op, m);
    const GeneratingReport g = generating_identity_check(e, l, seq);
    r.add("genfun", "e(t log(z)) = sum_n Q_n(t) z^(q^n)", params, g.ok,
          g.first_difference ? entry_json(*g.first_difference) : Json(nullptr));

    const ValuationReport v = valuation_profile(op, m);
    if (v.status == ValuationReport::Status::HypothesisNotMet) {
        r.note("genfun", "|sigma_1| = 1 and |sigma_l| <= 1", {{"preset", preset}, {"index", *v.hypothesis_index}},
               "hypothesis_not_met");
        return;
    }
    Json bv = Json::array();
    Json betav = Json::array();
    for (std::size_t j = 0; j <= m; ++j) {
        bv.push_back(v.b_val[j]);
        betav.push_back(v.beta_val[j] ? Json(*v.beta_val[j]) : Json{{"at_least", v.beta_floor[j]}});
    }
    r.add("genfun", "-v(b_j) = (q^j - 1)/(q - 1)", {{"preset", preset}, {"terms", m}, {"v", bv}}, !v.b_failure,
          Json{{"j", opt_json(v.b_failure)}});
    r.add("genfun", "-v(beta_j) <= (q^j - 1)/(q - 1)", {{"preset", preset}, {"terms", m}, {"v", betav}},
          !v.beta_failure, Json{{"j", opt_json(v.beta_failure)}});

    // Analytic side: expansion at a point of the disk and its boundary.
    const std::size_t pm = point_order(f.q());
    const BasicSequence pseq = BasicSequence::make(op, pm);
    const RatFn lam_r = f.q() == 2 ? RatFn(Poly::monomial(f, 1, 2)) : RatFn::x(f);
    const LaurentSeries lam = LaurentSeries::from_ratfn(lam_r, 64);
    const PointExpansionReport pe = point_expansion_check(op, pseq, lam, RatFn::x(f), 12);
    r.add("genfun", "e(lam t) = sum_n Q_n(t) e(lam)^(q^n)",
          {{"preset", preset}, {"lam", to_string(lam_r)}, {"t", "x"}, {"precision", 12}}, pe.ok,
          Json{{"exponent", opt_json(pe.first_difference)}});
    const RatFn edge_r = f.q() == 2 ? RatFn::x(f) : RatFn::one(f);
    bool diverged = false;
    std::optional<std::size_t> at;
    try {
        eval_lin_series(exp_series(op, pm).coeffs(), LaurentSeries::from_ratfn(edge_r, 64), 12);
    } catch (const Error& err) {
        if (err.code() != Errc::DivergentAtPoint) throw;
        diverged = true;
        at = err.index();
    }
    r.add("genfun", "e diverges on the boundary of the disk", {{"preset", preset}, {"lam", to_string(edge_r)}},
          diverged, Json{{"term", opt_json(at)}});
}

void suite_module(const Context& c, Report& r) {
    const Field& f = c.field;
    const CarlitzCache& cc = *c.cache;
    // The product oracle enumerates q^i factors.
    const std::size_t top = f.q() <= 3 ? 3 : f.q() <= 16 ? 2 : 1;
    for (std::size_t i = 0; i <= top; ++i) {
        const auto d = first_level_diff(carlitz_e(cc, i), carlitz_e_oracle(cc, i));
        r.add("module", "e_i = prod_{deg m < i} (t - m)", {{"i", i}}, !d, Json{{"level", opt_json(d)}});
    }

    const std::size_t deg = module_degree(f.q());
    const std::vector<Poly> all = polys_up_to(f, deg);
    std::vector<LinPoly> mods;
    for (const Poly& s : all) mods.push_back(carlitz_module(cc, s));
    if (c.cfg.perturb) {
        // polys_up_to lists 0, 1, ..., q-1 before x.
        LinPoly& cx = mods[f.q()];
        cx.set(0, cx.coeff(0) + RatFn::one(f));
    }
    for (std::size_t a = 0; a < all.size(); ++a) {
        std::optional<std::size_t> bad_mul;
        std::optional<std::size_t> bad_add;
        for (std::size_t b = 0; b < all.size(); ++b) {
            if (!bad_mul && lin_compose(mods[b], mods[a]) != carlitz_module(cc, all[a] * all[b])) bad_mul = b;
            if (!bad_add && mods[a] + mods[b] != carlitz_module(cc, all[a] + all[b])) bad_add = b;
        }
        const Json params{{"s", to_string(all[a])}, {"t_count", all.size()}};
        r.add("module", "C_{ts} = C_t o C_s", params, !bad_mul,
              Json{{"s", to_string(all[a])}, {"t", bad_mul ? Json(to_string(all[*bad_mul])) : Json(nullptr)}});
        r.add("module", "C_{s+t} = C_s + C_t", params, !bad_add,
              Json{{"s", to_string(all[a])}, {"t", bad_add ? Json(to_string(all[*bad_add])) : Json(nullptr)}});
    }

    // C_s(e_C(t)) = e_C(st) as truncated series.
    const std::size_t m = std::min<std::size_t>(c.cfg.terms, 4);
    const FormalLinSeries e = exp_series(c.carlitz(m), m);
    for (std::size_t a = 1; a < all.size(); ++a) {
        const RatFn s(all[a]);
        const FormalLinSeries lhs = series_compose(FormalLinSeries::from_linpoly(mods[a], m), e);
        std::vector<RatFn> rhs;
        for (std::size_t j = 0; j <= m; ++j) rhs.push_back(e.coeff(j) * s.frobenius(static_cast<unsigned>(j)));
        const auto d = first_level_diff(lhs.coeffs(), rhs, f);
        r.add("module", "C_s(e_C(t)) = e_C(st)", {{"s", to_string(all[a])}, {"terms", m}}, !d,
              Json{{"level", opt_json(d)}});
    }
}

using SuiteFn = void (*)(const Context&, Report&);

SuiteFn suite_fn(const std::string& name) {
    static const std::map<std::string, SuiteFn> table{
        {"kbinomial", suite_kbinomial}, {"taylor", suite_taylor},   {"gekeler", suite_reciprocal_factorials},
        {"orthonormal", suite_orthonormal}, {"genfun", suite_genfun}, {"module", suite_module}};
    auto it = table.find(name);
    return it == table.end() ? nullptr : it->second;
}

// ---- commands ----

struct Outcome {
    Json doc;
    int code = kOk;
};

std::size_t verify_cache_order(const RunConfig& cfg) {
    const Field f = Field::of_order(cfg.q);
    return std::max({cfg.n, cfg.terms, point_order(f.q()), 2 * module_degree(f.q()), std::size_t{3}});
}

Outcome cmd_verify(const RunConfig& cfg, const std::string& suite) {
    std::vector<std::string> names;
    if (suite == "all")
        names.assign(std::begin(kSuites), std::end(kSuites));
    else if (suite_fn(suite))
        names.push_back(suite);
    else
        throw Error(Errc::InvalidArgument, "unknown suite '" + suite + "'");
    const Context c = make_context(cfg, verify_cache_order(cfg));
    Report r;
    for (const auto& name : names) suite_fn(name)(c, r);
    Json doc{{"schema", 1}, {"command", "verify"}, {"suite", suite}, {"config", config_json(c)}};
    doc["checks"] = r.checks();
    doc["summary"] = r.summary();
    doc["ok"] = r.ok();
    return {std::move(doc), r.ok() ? kOk : kViolation};
}

Outcome cmd_basic(const RunConfig& cfg) {
    const Context c = make_context(cfg, cfg.n);
    const BasicSequence seq = BasicSequence::make(c.op(cfg.n), cfg.n);
    Json rows = Json::array();
    for (std::size_t n = 0; n <= cfg.n; ++n) {
        Json gamma = Json::array();
        for (std::size_t j = 0; j <= n; ++j) gamma.push_back(to_string(seq.gamma(n, j)));
        rows.push_back({{"n", n},
                        {"gamma_row", std::move(gamma)},
                        {"Q_coeffs", coeffs_json(seq.Q(n))},
                        {"P_coeffs", coeffs_json(seq.P(n))}});
    }
    Json doc{{"schema", 1}, {"command", "basic"}, {"config", config_json(c)}};
    Json c_list = Json::array();
    for (std::size_t n = 1; n <= cfg.n; ++n) c_list.push_back(to_string(seq.op().c(n)));
    doc["c"] = c_list;
    doc["rows"] = rows;
    return {std::move(doc), kOk};
}

Outcome cmd_carlitz(const RunConfig& cfg) {
    const Field f = make_field(cfg);
    const CarlitzCache cc(f, cfg.n);
    Json rows = Json::array();
    for (std::size_t i = 0; i <= cfg.n; ++i)
        rows.push_back({{"i", i},
                        {"bracket", i == 0 ? Json(nullptr) : Json(to_string(cc.bracket(i)))},
                        {"D", to_string(cc.D(i))},
                        {"L", to_string(cc.L(i))},
                        {"e_coeffs", coeffs_json(carlitz_e(cc, i))},
                        {"f_coeffs", coeffs_json(carlitz_f(cc, i))}});
    Json doc{{"schema", 1}, {"command", "carlitz"}, {"config", {{"q", f.q()}, {"p", f.p()}, {"nu", f.nu()}, {"n", cfg.n}}}};
    doc["rows"] = rows;
    return {std::move(doc), kOk};
}

Outcome cmd_genfun(const RunConfig& cfg, std::vector<std::string> checks) {
    if (checks.empty()) checks = {"inverse", "fixedpoint", "identity", "valuations"};
    const std::size_t m = cfg.terms;
    const Context c = make_context(cfg, m);
    const DeltaOperator op = c.op(m);
    const FormalLinSeries e = exp_series(op, m);
    const FormalLinSeries l = compositional_inverse(e);
    Json rows = Json::array();
    for (std::size_t j = 0; j <= m; ++j)
        rows.push_back({{"j", j}, {"b", to_string(e.coeff(j))}, {"beta", to_string(l.coeff(j))}});
    const std::string preset = c.sigma_name();
    const Json params{{"preset", preset}, {"terms", m}};
    Report r;
    for (const auto& check : checks) {
        if (check == "inverse") {
            const auto el = identity_mismatch(series_compose(e, l));
            const auto le = identity_mismatch(series_compose(l, e));
            r.add("genfun", "e o log = identity", params, !el, Json{{"level", opt_json(el)}});
            r.add("genfun", "log o e = identity", params, !le, Json{{"level", opt_json(le)}});
        } else if (check == "fixedpoint") {
            const FixedPointReport fp = delta_fixed_point_check(op, e);
            r.add("genfun", "delta_0 e = e^q", params, fp.ok, Json{{"level", opt_json(fp.first_failure)}});
        } else if (check == "identity") {
            const GeneratingReport g = generating_identity_check(e, l, BasicSequence::make(op, m));
            r.add("genfun", "e(t log(z)) = sum_n Q_n(t) z^(q^n)", params, g.ok,
                  g.first_difference ? entry_json(*g.first_difference) : Json(nullptr));
        } else if (check == "valuations") {
            const ValuationReport v = valuation_profile(op, m);
            if (v.status == ValuationReport::Status::HypothesisNotMet) {
                r.note("genfun", "|sigma_1| = 1 and |sigma_l| <= 1", {{"preset", preset}, {"index", *v.hypothesis_index}},
                       "hypothesis_not_met");
                continue;
            }
            Json vals = Json::array();
            for (std::size_t j = 0; j <= m; ++j)
                vals.push_back({{"j", j},
                                {"v_b", v.b_val[j]},
                                {"v_beta", opt_json(v.beta_val[j])},
                                {"v_beta_at_least", v.beta_floor[j]}});
            r.add("genfun", "-v(b_j) = (q^j - 1)/(q - 1)", params, !v.b_failure, Json{{"j", opt_json(v.b_failure)}});
            r.add("genfun", "-v(beta_j) <= (q^j - 1)/(q - 1)", params, !v.beta_failure,
                  Json{{"j", opt_json(v.beta_failure)}});
            rows = Json::array();
            for (std::size_t j = 0; j <= m; ++j) {
                Json row = vals[j];
                row["b"] = to_string(e.coeff(j));
                row["beta"] = to_string(l.coeff(j));
                rows.push_back(std::move(row));
            }
        } else {
            throw Error(Errc::InvalidArgument, "unknown check '" + check + "'");
        }
    }
    Json doc{{"schema", 1}, {"command", "genfun"}, {"config", config_json(c)}};
    doc["rows"] = rows;
    doc["checks"] = r.checks();
    doc["summary"] = r.summary();
    doc["ok"] = r.ok();
    return {std::move(doc), r.ok() ? kOk : kViolation};
}

Outcome cmd_expand(const RunConfig& cfg, const std::vector<std::string>& coef, std::optional<std::size_t> basis) {
    if (coef.empty() == !basis) throw Error(Errc::InvalidArgument, "give exactly one of --coef and --basis");
    const Field f = make_field(cfg);
    LinPoly g(f);
    if (!basis) {
        std::vector<RatFn> a;
        for (const auto& s : coef) a.push_back(parse_ratfn(s, f));
        g = LinPoly(f, std::move(a));
    }
    const std::size_t level = basis ? *basis : g.level().value_or(0);
    const std::size_t order = std::max(cfg.n, level);
    const Context c = make_context(cfg, order);
    const BasicSequence seq = BasicSequence::make(c.op(order), order);
    if (basis) g = seq.Q(*basis);

    const std::vector<RatFn> psi = taylor_expand(seq, g);
    const std::vector<RatFn> solved = taylor_solve(seq, g);
    const bool agree = psi == solved;
    const bool rebuilt = expansion_sum(seq, psi) == g;
    Json doc{{"schema", 1}, {"command", "expand"}, {"config", config_json(c)}};
    doc["f"] = coeffs_json(g);
    doc["psi"] = coeffs_json(psi);
    doc["psi_solve"] = coeffs_json(solved);
    doc["routes_agree"] = agree;
    doc["reconstructs"] = rebuilt;
    doc["psi_norm_exponent"] = opt_json(max_neg_valuation(psi));
    doc["carlitz"] = coeffs_json(carlitz_expand(*c.cache, g));
    doc["norm_exponent"] = opt_json(sup_norm(*c.cache, g));
    return {std::move(doc), agree && rebuilt ? kOk : kViolation};
}

Outcome cmd_eval(const RunConfig& cfg, const std::string& series, const std::string& at, std::int64_t prec) {
    if (series != "exp" && series != "log") throw Error(Errc::InvalidArgument, "--series must be exp or log");
    if (prec <= 0) throw Error(Errc::InvalidArgument, "--prec must be positive");
    const Context c = make_context(cfg, cfg.terms);
    const Field& f = c.field;
    const DeltaOperator op = c.op(cfg.terms);
    const FormalLinSeries e = exp_series(op, cfg.terms);
    const std::vector<RatFn> b = series == "exp" ? e.coeffs() : compositional_inverse(e).coeffs();
    const RatFn lam_r = parse_ratfn(at, f);
    // Each term needs lam to about the target precision (Frobenius scales it).
    const LaurentSeries lam = LaurentSeries::from_ratfn(lam_r, prec + 8);
    const LaurentSeries value = eval_lin_series(b, lam, prec);

    Json doc{{"schema", 1}, {"command", "eval"}, {"config", config_json(c)}};
    doc["series"] = series;
    doc["at"] = to_string(lam_r);
    doc["precision"] = prec;
    doc["value"] = value.to_string();
    doc["valuation"] = opt_json(value.valuation());
    Report r;
    if (series == "exp" && !cfg.sigma_file && c.sigma.kind() == SigmaSpec::Kind::Carlitz) {
        // C_x(e_C(lam)) = e_C(x lam).
        const LaurentSeries lhs = eval_lin_poly(carlitz_module(*c.cache, Poly::x(f)).coeffs(), value, prec);
        const LaurentSeries x = LaurentSeries::from_ratfn(RatFn::x(f), prec + 8);
        const LaurentSeries rhs = eval_lin_series(b, x * lam, prec);
        const auto d = lhs.first_difference(rhs);
        r.add("eval", "C_x(e_C(lam)) = e_C(x lam)", {{"precision", prec}}, !d, Json{{"exponent", opt_json(d)}});
    }
    doc["checks"] = r.checks();
    doc["ok"] = r.ok();
    return {std::move(doc), r.ok() ? kOk : kViolation};
}

// ---- output ----

std::string scalar_text(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void render_text(const Json& doc, std::ostream& os) {
    for (const auto& [key, v] : doc.items()) {
        if (key == "checks") {
            for (const Json& c : v) {
                os << (c["ok"].get<bool>() ? "PASS " : "FAIL ") << c["suite"].get<std::string>() << ": "
                   << c["identity"].get<std::string>() << " " << c["params"].dump();
                if (c.contains("status")) os << " [" << c["status"].get<std::string>() << "]";
                if (c.contains("counterexample")) os << " at " << c["counterexample"].dump();
                os << "\n";
            }
        } else if (v.is_array() && !v.empty() && v.front().is_object()) {
            os << key << ":\n";
            for (const Json& row : v) os << "  " << row.dump() << "\n";
        } else if (v.is_object()) {
            os << key << ":";
            for (const auto& [k, x] : v.items()) os << " " << k << "=" << scalar_text(x);
            os << "\n";
        } else {
            os << key << ": " << scalar_text(v) << "\n";
        }
    }
}

int errc_exit(Errc code) { return code == Errc::NotDeltaOperator ? kNotDelta : kInvalidInput; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"umbra: exact umbral calculus over F_q(x)", "umbra"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    std::uint32_t nu = 0;
    std::string sigma_file;
    app.add_option("--q", cfg.q, "field order q = p^nu")->check(CLI::PositiveNumber);
    app.add_option("--nu", nu, "extension degree; must match --q");
    auto* preset = app.add_option("--preset", cfg.preset, "carlitz, laguerre or example2");
    auto* sigma = app.add_option("--sigma", sigma_file, "JSON file with sigma_1, sigma_2, ... as strings");
    preset->excludes(sigma);
    app.add_option("--n", cfg.n, "largest sequence index");
    app.add_option("--terms", cfg.terms, "series order M");
    app.add_option("--seed", cfg.seed, "seed for randomized checks");
    app.add_option("--samples", cfg.samples, "random samples per randomized check");
    app.add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    std::string out_path;
    app.add_option("--out", out_path, "write output to this file");
    app.add_flag("--perturb", cfg.perturb, "inject one wrong coefficient (negative control)");

    auto* basic = app.add_subcommand("basic", "basic sequence table");
    auto* carlitz = app.add_subcommand("carlitz", "Carlitz factorials and polynomials");
    auto* verify = app.add_subcommand("verify", "run an identity suite");
    std::string suite;
    verify->add_option("suite", suite, "kbinomial|taylor|gekeler|orthonormal|genfun|module|all")->required();
    auto* genfun = app.add_subcommand("genfun", "generalized exponential and logarithm");
    std::vector<std::string> checks;
    genfun->add_option("--check", checks, "inverse|fixedpoint|identity|valuations (repeatable)");
    auto* expand = app.add_subcommand("expand", "expansion in a basic sequence");
    std::vector<std::string> coef;
    std::size_t basis_index = 0;
    expand->add_option("--coef", coef, "coefficients of t, t^q, t^(q^2), ...");
    auto* basis = expand->add_option("--basis", basis_index, "expand Q_k of the sequence itself");
    auto* eval = app.add_subcommand("eval", "evaluate e or log at a point of F_q((x))");
    std::string series = "exp";
    std::string at;
    std::int64_t prec = 16;
    eval->add_option("--series", series, "exp or log");
    eval->add_option("--at", at, "the point, as a rational function of x")->required();
    eval->add_option("--prec", prec, "absolute x-adic precision");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    }
    if (app.count("--nu")) cfg.nu = nu;
    if (!sigma_file.empty()) cfg.sigma_file = sigma_file;
    if (!out_path.empty()) cfg.out = out_path;

    Outcome res;
    try {
        if (basic->parsed())
            res = cmd_basic(cfg);
        else if (carlitz->parsed())
            res = cmd_carlitz(cfg);
        else if (verify->parsed())
            res = cmd_verify(cfg, suite);
        else if (genfun->parsed())
            res = cmd_genfun(cfg, checks);
        else if (expand->parsed())
            res = cmd_expand(cfg, coef, basis->count() ? std::optional<std::size_t>(basis_index) : std::nullopt);
        else
            res = cmd_eval(cfg, series, at, prec);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return errc_exit(e.code());
    }

    std::ostringstream text;
    if (cfg.format == "text")
        render_text(res.doc, text);
    else
        text << res.doc.dump(2) << "\n";
    if (cfg.out) {
        std::ofstream file(*cfg.out, std::ios::binary);
        if (!file) {
            err << "error: cannot write '" << *cfg.out << "'\n";
            return kInvalidInput;
        }
        file << text.str();
    } else {
        out << text.str();
    }
    return res.code;
}

}  // namespace umbra::cli
