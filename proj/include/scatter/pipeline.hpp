#pragma once

// verify / scatter / eval as library calls returning a report and an exit code.

#include "random.hpp"
#include "serialize.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace scatter {

enum class Format { Json, Csv };

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    Example example = Example::Selfsim;
    std::vector<int> indices{2, 4, 6};
    int radius = 8;
    double tol = 1e-6;
    std::uint64_t seed = 1;
    std::string output;  // empty: stdout
    Format format = Format::Json;

    void validate() const {
        if (radius < 1) throw ConfigError("radius must be >= 1");
        if (!(tol > 0)) throw ConfigError("tol must be > 0");
        for (int n : indices)
            if (n < 1 || n > 12) throw ConfigError("scattering indices must lie in [1, 12]");
    }

    Json to_json() const {
        return {{"example", example == Example::Bundle ? "bundle" : "selfsim"},
                {"indices", indices},
                {"radius", radius},
                {"tol", tol},
                {"seed", seed},
                {"output", output},
                {"format", format == Format::Json ? "json" : "csv"}};
    }
};

struct Check {
    std::string id;
    bool passed = false;
    std::string detail;
};

struct Report {
    std::string command;
    Json config;
    std::vector<Check> checks;
    Json sections = Json::object();
    std::string csv;

    void add(std::string id, bool ok, std::string detail = {}) { checks.push_back({std::move(id), ok, std::move(detail)}); }

    std::size_t failed() const {
        return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; }));
    }
    int exit_code() const { return failed() == 0 ? 0 : 1; }

    Json to_json() const {
        auto sorted = checks;
        std::stable_sort(sorted.begin(), sorted.end(), [](const Check& a, const Check& b) { return a.id < b.id; });
        Json cs = Json::array();
        for (const auto& c : sorted) cs.push_back({{"id", c.id}, {"passed", c.passed}, {"detail", c.detail}});
        Json out = sections;
        out["schema_version"] = schema_version;
        out["command"] = command;
        out["config"] = config;
        out["checks"] = cs;
        out["summary"] = {{"total", checks.size()}, {"failed", failed()}, {"all_passed", failed() == 0}};
        return out;
    }

    std::string render(Format f) const { return f == Format::Csv ? csv : to_json().dump(2) + "\n"; }
};

namespace detail {

inline GElt<HWord> zz(std::int64_t n, std::int64_t m) { return {HWord{}, FWord{}, n, m}; }
inline GElt<HWord> fgen(const char* w) { return GElt<HWord>::from_f(parse_f(w)); }

}  // namespace detail

// ---- identity and germ suites (self-similar example) -----------------------------

/// 1y = y1, ay = y(1,0), by = y(0,1), aby = y(1,1) for every y.
inline void suite_product_with_y(Report& rep) {
    using S = SElt<HWord>;
    using L = Letter<HWord>;
    const std::pair<const char*, GElt<HWord>> cases[] = {
        {"1", detail::zz(0, 0)}, {"a", detail::zz(1, 0)}, {"b", detail::zz(0, 1)}, {"ab", detail::zz(1, 1)}};
    std::size_t n_checked = 0;
    std::string bad;
    for (int ch = 1; ch <= 2; ++ch)
        for (std::int64_t n = -20; n <= 20; ++n)
            for (const auto& [w, tau] : cases) {
                auto y = L::Y(ch, n);
                auto lhs = s_mul(S::group(GElt<HWord>::from_f(parse_f(w))), S::path({y}));
                auto rhs = s_mul(S::path({y}), S::group(tau));
                ++n_checked;
                if (lhs != rhs && bad.empty()) bad = std::string(w) + "*" + y.str() + " = " + lhs.str();
            }
    rep.add("identity.product_with_y", bad.empty(), bad.empty() ? std::to_string(n_checked) + " identities" : bad);
}

/// (p,q) y^i_n and (p,q) z^i_k for (p,q) in {0,1}^2.
inline void suite_product_after_y(Report& rep, Rng& rng) {
    using S = SElt<HWord>;
    using L = Letter<HWord>;
    std::size_t n_checked = 0;
    std::string bad;
    auto expect = [&](const GElt<HWord>& g, const L& x, const L& image) {
        ++n_checked;
        auto lhs = s_mul(S::group(g), S::path({x}));
        if (lhs != S::path({image}) && bad.empty()) bad = g.str() + "*" + x.str() + " = " + lhs.str();
    };
    for (int ch = 1; ch <= 2; ++ch)
        for (std::int64_t n = -20; n <= 20; ++n) {
            auto y = L::Y(ch, n);
            auto shifted = L::Y(ch, n + 1);
            // The pair coordinate matching the channel shifts; the other is inert.
            expect(detail::zz(0, 0), y, y);
            expect(ch == 1 ? detail::zz(0, 1) : detail::zz(1, 0), y, y);
            expect(ch == 1 ? detail::zz(1, 0) : detail::zz(0, 1), y, shifted);
            expect(detail::zz(1, 1), y, shifted);
        }
    const KElt<HWord> t{HWord{}, FWord{}, 1};
    for (int s = 0; s < 50; ++s) {
        auto k = random_kelt<HWord>(rng);
        for (int ch = 1; ch <= 2; ++ch) {
            auto z = L::Z(ch, k);
            auto moved = L::Z(ch, t * k);
            expect(detail::zz(0, 0), z, z);
            expect(ch == 1 ? detail::zz(0, 1) : detail::zz(1, 0), z, z);
            expect(ch == 1 ? detail::zz(1, 0) : detail::zz(0, 1), z, moved);
            expect(detail::zz(1, 1), z, moved);
        }
    }
    rep.add("identity.product_after_y", bad.empty(), bad.empty() ? std::to_string(n_checked) + " identities" : bad);
}

/// h1 != h2 in sphere(1) u sphere(2): [h1,w] = [h2,w] iff w starts in Y.
inline void suite_germ_intersection(Report& rep, Rng& rng) {
    using S = SElt<HWord>;
    auto hs = sphere<CD>(1);
    for (const auto& h : sphere<CD>(2)) hs.push_back(h);
    std::vector<Word<HWord>> words;
    for (int i = 0; i < 100; ++i) words.push_back(random_word<HWord>(rng, 1, 4));
    std::size_t n_checked = 0;
    std::string bad;
    for (std::size_t a = 0; a < hs.size(); ++a)
        for (std::size_t b = a + 1; b < hs.size(); ++b)
            for (const auto& w : words) {
                bool eq = germ_eq(S::group(GElt<HWord>::from_h(hs[a])), S::group(GElt<HWord>::from_h(hs[b])), w);
                ++n_checked;
                if (eq != w.at(0).is_y() && bad.empty()) bad = hs[a].str() + " vs " + hs[b].str() + " at " + w.str();
            }
    rep.add("germs.intersection", bad.empty(), bad.empty() ? std::to_string(n_checked) + " germ pairs" : bad);
}

inline void suite_germ_laws(Report& rep, Rng& rng) {
    std::string bad;
    int n_checked = 0;
    for (int i = 0; i < 300 && bad.empty(); ++i) {
        auto w = random_word<HWord>(rng, 0, 4);
        std::vector<SElt<HWord>> ss;
        while (ss.size() < 3) {
            auto s = random_selt<HWord>(rng, 1);
            if (s_defined_at(s, w)) ss.push_back(s);
        }
        // Bias toward collisions: also try a perturbation of the first element.
        ss.push_back(s_mul(ss[0], SElt<HWord>::group(GElt<HWord>::from_h(HWord::generator(0)))));
        if (!s_defined_at(ss.back(), w)) ss.pop_back();
        for (const auto& s : ss) {
            if (!germ_eq(s, s, w)) bad = "not reflexive at " + s.str();
            for (const auto& t : ss) {
                if (germ_eq(s, t, w) != germ_eq(t, s, w)) bad = "not symmetric";
                if (germ_eq(s, t, w) != (germ_key(s, w) == germ_key(t, w))) bad = "key disagrees at " + s.str() + ", " + t.str();
                for (const auto& u : ss)
                    if (germ_eq(s, t, w) && germ_eq(t, u, w) && !germ_eq(s, u, w)) bad = "not transitive";
            }
        }
        ++n_checked;
    }
    rep.add("germs.equivalence_laws", bad.empty(), bad.empty() ? std::to_string(n_checked) + " samples" : bad);
}

inline void suite_inverse_semigroup(Report& rep, Rng& rng) {
    std::string bad;
    for (int i = 0; i < 300 && bad.empty(); ++i) {
        auto s = random_selt<HWord>(rng), t = random_selt<HWord>(rng), u = random_selt<HWord>(rng);
        if (s_mul(s_mul(s, s_inv(s)), s) != s) bad = "s s* s != s for " + s.str();
        else if (s_mul(s_mul(s, t), u) != s_mul(s, s_mul(t, u))) bad = "not associative";
        else if (s_inv(s_mul(s, t)) != s_mul(s_inv(t), s_inv(s))) bad = "(st)* != t* s*";
        else {
            auto e = s_mul(s, s_inv(s)), f = s_mul(t, s_inv(t));
            if (s_mul(e, f) != s_mul(f, e)) bad = "idempotents do not commute";
        }
    }
    rep.add("semigroup.inverse_laws", bad.empty(), bad.empty() ? "300 triples" : bad);
}

inline void suite_stabilization(Report& rep, Rng& rng) {
    std::string bad;
    for (int i = 0; i < 200 && bad.empty(); ++i) {
        auto g = random_gelt<HWord>(rng);
        std::vector<Letter<HWord>> letters;
        for (int j = 0; j < 6; ++j) letters.push_back(random_letter<HWord>(rng));
        if (!restrictions_stabilize(g, letters)) bad = "restriction of " + g.str() + " did not stabilize";
    }
    rep.add("selfsim.restriction_stabilization", bad.empty(), bad.empty() ? "200 elements" : bad);
}

inline void suite_effectiveness(Report& rep, Rng& rng) {
    std::string bad;
    for (int i = 0; i < 200 && bad.empty(); ++i) {
        auto g = random_nontrivial_gelt<HWord>(rng);
        int ch = effectiveness_witness(g);
        auto z = Letter<HWord>::Z(ch, KElt<HWord>{});
        if (act_letter(g, z) == z) bad = g.str() + " fixes " + z.str();
        auto fix = strongly_fixed_spectrum(g);
        if (fix.families[2].kind == FixKind::Cofinite && fix.families[3].kind == FixKind::Cofinite)
            bad = g.str() + " strongly fixes cofinitely many z letters";
    }
    rep.add("selfsim.effectiveness", bad.empty(), bad.empty() ? "200 elements" : bad);
}

// ---- steps (self-similar example) ---------------------------------------------------

inline SteinElt<HWord> selfsim_a_chiB() { return st_conv(selfsim_a<HWord>(), selfsim_chiB<HWord>()); }
inline SteinElt<HWord> selfsim_a_bn(int n) { return st_conv(selfsim_a<HWord>(), selfsim_bn(n)); }

inline Rational inv_sphere(int n) { return Rational(BigInt(1), BigInt(sphere_size(2, n))); }

/// Validates a witness by evaluating at [h, z^i_k w] for sampled typical k and tails w.
inline bool validate_witness(const SteinElt<HWord>& f, const OpenWitness<HWord>& wit, Rng& rng, int samples, std::string& why) {
    if (!(wit.floor > 0)) {
        why = "zero floor";
        return false;
    }
    for (int i = 0; i < samples; ++i) {
        KElt<HWord> k = random_kelt<HWord>(rng);
        if (witness_excludes(wit, k)) continue;
        auto tail = random_word<HWord>(rng, 0, 3);
        auto w = prepend(FinWord<HWord>{Letter<HWord>::Z(wit.channel, k)}, tail);
        Rational v = st_eval(f, SElt<HWord>::group(wit.h), w);
        if (abs(v) < wit.floor) {
            why = "value " + to_string(v) + " at [" + wit.h.str() + ", " + w.str() + "]";
            return false;
        }
    }
    return true;
}

inline void selfsim_steps(Report& rep, const RunConfig& cfg, Rng& rng) {
    // Step 1: scattering sequence and its profile.
    HNormOptions opt;
    opt.tol = cfg.tol;
    auto profile = cauchy_profile(Example::Selfsim, cfg.indices, opt);
    Json rows = Json::array();
    for (const auto& r : profile) rows.push_back(to_json(r));
    rep.sections["cauchy_profile"] = rows;
    rep.csv = profile_csv(profile);

    bool rate_ok = true, order_ok = true;
    for (const auto& r : profile) {
        if (!r.m && r.sup_dist != inv_sphere(r.n)) rate_ok = false;
        if (r.lower > r.upper * (1 + 1e-12) + 1e-12) order_ok = false;
    }
    rep.add("step1.sup_rate.b_n", rate_ok, "sup|b_n - chi_B| = 1/|S_n|");
    rep.add("step1.bounds_ordered", order_ok, "lower <= upper in every row");
    // Pair-row upper bounds decrease in the smaller index.
    bool mono = true;
    for (const auto& r : profile)
        for (const auto& q : profile)
            if (r.m && q.m && r.n != *r.m && q.n != *q.m && r.n < q.n && !(q.upper < r.upper)) mono = false;
    rep.add("step1.cauchy_upper_decreasing", mono, "pair-row upper bounds strictly decrease in min(n,m)");

    Json rates = Json::array();
    bool arate_ok = true;
    auto a_chiB = selfsim_a_chiB();
    for (int n : cfg.indices) {
        Rational d = st_sup_dist(selfsim_a_bn(n), a_chiB);
        rates.push_back({{"n", n}, {"sup_dist", to_string(d)}});
        if (d != inv_sphere(n)) arate_ok = false;
    }
    rep.sections["a_b_n_sup_dist"] = rates;
    rep.add("step1.sup_rate.a_b_n", arate_ok, "sup|a*b_n - a*chi_B| = 1/|S_n|");

    // Step 2: a * chi_B is singular and its support is the four-germ family.
    auto verdict = st_is_singular(a_chiB);
    Json strata = Json::array();
    for (const auto& s : verdict.strata) strata.push_back(to_json(s));
    rep.sections["support_a_chiB"] = strata;
    rep.sections["verdict_a_chiB"] = verdict_name(verdict.verdict);
    rep.add("step2.a_chiB.singular", verdict.verdict == Verdict::Singular, verdict_name(verdict.verdict));

    std::set<std::pair<std::string, std::string>> family, expect{
        {"(1,1,0,0)", "1"}, {"(1,a,0,0)", "-1"}, {"(1,b,0,0)", "-1"}, {"(1,ab,0,0)", "1"}};
    bool only_y = true;
    for (const auto& s : verdict.strata) {
        if (s.pattern.empty() || !s.pattern.front().is_y() || !s.base.is_group()) only_y = false;
        family.insert({s.base.g.str(), to_string(s.value)});
    }
    rep.add("step2.a_chiB.support", only_y && family == expect, "support = {[1,y],[a,y],[b,y],[ab,y]}");
    rep.add("step2.a_chiB.no_witness", !st_open_witness(a_chiB).has_value(), "no open bisection in the support");

    // Step 3: a * b_n is not singular; the witness bisection is validated by evaluation.
    Json verdicts = Json::object();
    for (int n : cfg.indices) {
        auto f = selfsim_a_bn(n);
        auto v = st_is_singular(f);
        std::string why;
        bool ok = v.verdict == Verdict::Nonsingular && v.witness && validate_witness(f, *v.witness, rng, 50, why);
        verdicts[std::to_string(n)] = {{"verdict", verdict_name(v.verdict)},
                                       {"witness", v.witness ? to_json(*v.witness) : Json(nullptr)}};
        rep.add("step3.a_b_n.nonsingular.n" + std::to_string(n), ok, why.empty() ? verdict_name(v.verdict) : why);
    }
    rep.sections["verdicts_a_b_n"] = verdicts;
}

// ---- bundle example ------------------------------------------------------------------

inline BSteinElt<HWord> bundle_a_chiB() { return bstein_conv(bundle_a<HWord>(), bundle_chiB<HWord>()); }
inline BSteinElt<HWord> bundle_a_bn(int n) { return bstein_conv(bundle_a<HWord>(), bundle_bn(n)); }

inline void suite_bundle_sets(Report& rep, Rng& rng) {
    std::string bad;
    for (int i = 0; i < 200 && bad.empty(); ++i) {
        auto u = random_bset(rng), v = random_bset(rng);
        for (int j = 0; j < 20; ++j) {
            auto p = random_bunit(rng, 6);
            bool a = u.contains(p), b = v.contains(p);
            if ((u & v).contains(p) != (a && b) || (u | v).contains(p) != (a || b) || (u - v).contains(p) != (a && !b) ||
                u.complement().contains(p) == a)
                bad = "set algebra fails at " + p.str() + " for " + u.str() + ", " + v.str();
        }
    }
    rep.add("bundle.set_algebra", bad.empty(), bad.empty() ? "200 pairs" : bad);
}

inline void suite_bundle_star(Report& rep, Rng& rng) {
    std::string bad;
    for (int i = 0; i < 100 && bad.empty(); ++i) {
        auto f = random_bstein<HWord>(rng), g = random_bstein<HWord>(rng);
        auto lhs = bstein_star(bstein_conv(f, g)), rhs = bstein_conv(bstein_star(g), bstein_star(f));
        if (!bstein_is_zero(lhs - rhs)) bad = "(fg)* != g* f*";
    }
    rep.add("bundle.star_antimultiplicative", bad.empty(), bad.empty() ? "100 pairs" : bad);
}

inline void bundle_steps(Report& rep, const RunConfig& cfg, Rng& rng) {
    HNormOptions opt;
    opt.tol = cfg.tol;
    auto profile = cauchy_profile(Example::Bundle, cfg.indices, opt);
    Json rows = Json::array();
    for (const auto& r : profile) rows.push_back(to_json(r));
    rep.sections["cauchy_profile"] = rows;
    rep.csv = profile_csv(profile);

    bool rate_ok = true, order_ok = true;
    for (const auto& r : profile) {
        if (!r.m && r.sup_dist != inv_sphere(r.n)) rate_ok = false;
        if (r.lower > r.upper * (1 + 1e-12) + 1e-12) order_ok = false;
    }
    rep.add("step1.sup_rate.b_n", rate_ok, "sup|b_n - chi_B| = 1/|S_n|");
    rep.add("step1.bounds_ordered", order_ok, "lower <= upper in every row");
    bool mono = true;
    for (const auto& r : profile)
        for (const auto& q : profile)
            if (r.m && q.m && r.n != *r.m && q.n != *q.m && r.n < q.n && !(q.upper < r.upper)) mono = false;
    rep.add("step1.cauchy_upper_decreasing", mono, "pair-row upper bounds strictly decrease in min(n,m)");

    // Values of b_n on each unit type.
    using A = BArrow<HWord>;
    for (int n : cfg.indices) {
        auto b = bundle_bn(n);
        auto sph = sphere<CD>(n);
        std::string bad;
        auto want = [&](const A& a, const Rational& v) {
            if (bstein_eval(b, a) != v && bad.empty()) bad = a.str() + " -> " + to_string(bstein_eval(b, a));
        };
        want(A::make(0, {}, BUnit::x(1, 1)), 1);
        want(A::make(0, {}, BUnit::y(1)), 1);
        want(A::make(1, {}, BUnit::y(1)), 0);
        for (const auto& u : {BUnit::z(1), BUnit::z(7), BUnit::eps()}) {
            for (std::size_t i = 0; i < sph.size(); i += std::max<std::size_t>(1, sph.size() / 16)) {
                want(A::make(0, sph[i], u), inv_sphere(n));
                want(A::make(1, sph[i], u), 0);
            }
            want(A::make(0, HWord{}, u), 0);
        }
        rep.add("step1.values.b_n.n" + std::to_string(n), bad.empty(), bad.empty() ? "x:1, (0,y):1, (1,y):0, (0,h):1/|S_n|" : bad);
    }

    Json rates = Json::array();
    bool arate_ok = true;
    auto a_chiB = bundle_a_chiB();
    for (int n : cfg.indices) {
        Rational d = bundle_sup_dist(bundle_a_bn(n), a_chiB);
        rates.push_back({{"n", n}, {"sup_dist", to_string(d)}});
        if (d != inv_sphere(n)) arate_ok = false;
    }
    rep.sections["a_b_n_sup_dist"] = rates;
    rep.add("step1.sup_rate.a_b_n", arate_ok, "sup|a*b_n - a*chi_B| = 1/|S_n|");

    // Step 2: value table and singularity of a * chi_B.
    const std::pair<A, Rational> table[] = {
        {A::make(0, {}, BUnit::x(1, 1)), 0}, {A::make(0, {}, BUnit::y(1)), 1}, {A::make(1, {}, BUnit::y(1)), -1},
        {A::make(0, HWord::generator(0), BUnit::z(1)), 0}, {A::make(1, {}, BUnit::z(1)), 0},
        {A::make(0, {}, BUnit::eps()), 0}, {A::make(1, HWord::generator(1), BUnit::eps()), 0}};
    Json vt = Json::array();
    bool table_ok = true;
    for (const auto& [a, v] : table) {
        Rational got = bstein_eval(a_chiB, a);
        vt.push_back({{"arrow", a.str()}, {"value", to_string(got)}});
        if (got != v) table_ok = false;
    }
    rep.sections["values_a_chiB"] = vt;
    rep.add("step2.a_chiB.values", table_ok, "x:0, (0,y):1, (1,y):-1, z:0, eps:0");
    auto verdict = bundle_is_singular(a_chiB);
    rep.sections["verdict_a_chiB"] = verdict.singular ? "singular" : "nonsingular";
    rep.add("step2.a_chiB.singular", verdict.singular, verdict.singular ? "singular" : "witness " + verdict.witness->str());

    // Restrictions to compact open U inside B that meet Y: singular and non-zero.
    std::string bad;
    for (int i = 0; i < 5; ++i) {
        std::set<std::int64_t> cols;
        auto col = uniform_int(rng, 1, 6);
        for (auto j = uniform_int(rng, 0, 3); j > 0; --j) cols.insert(uniform_int(rng, 1, 6));
        BUnitSet u = BUnitSet::y_cylinder(col, cols);
        if (uniform_int(rng, 0, 1)) u = u | BUnitSet::point(BUnit::x(uniform_int(rng, 1, 6), uniform_int(rng, 1, 6)));
        auto f = bstein_conv(bundle_a<HWord>(), BSteinElt<HWord>::chi({0, HWord{}}, u));
        if (!bundle_is_singular(f).singular || bstein_is_zero(f)) bad = "fails for U = " + u.str();
    }
    rep.add("step2.restriction_to_B.singular_nonzero", bad.empty(), bad.empty() ? "5 sampled U" : bad);

    // Step 3: a * b_n is not singular.
    Json verdicts = Json::object();
    for (int n : cfg.indices) {
        auto f = bundle_a_bn(n);
        auto v = bundle_is_singular(f);
        bool ok = !v.singular && v.witness && bstein_eval(f, *v.witness) != 0;
        verdicts[std::to_string(n)] = {{"verdict", v.singular ? "singular" : "nonsingular"},
                                       {"witness", v.witness ? Json(v.witness->str()) : Json(nullptr)}};
        rep.add("step3.a_b_n.nonsingular.n" + std::to_string(n), ok, ok ? "isolated arrow " + v.witness->str() : "no witness");
    }
    rep.sections["verdicts_a_b_n"] = verdicts;
}

// ---- commands ---------------------------------------------------------------------

inline Report cmd_verify(const RunConfig& cfg) {
    cfg.validate();
    Report rep;
    rep.command = "verify";
    rep.config = cfg.to_json();
    rep.csv = profile_csv({});
    Rng rng(cfg.seed);
    if (cfg.example == Example::Selfsim) {
        suite_product_with_y(rep);
        suite_product_after_y(rep, rng);
        suite_germ_intersection(rep, rng);
        suite_germ_laws(rep, rng);
        suite_inverse_semigroup(rep, rng);
        suite_stabilization(rep, rng);
        suite_effectiveness(rep, rng);
        if (!cfg.indices.empty()) selfsim_steps(rep, cfg, rng);
    } else {
        suite_bundle_sets(rep, rng);
        suite_bundle_star(rep, rng);
        if (!cfg.indices.empty()) bundle_steps(rep, cfg, rng);
    }
    return rep;
}

struct ScatterRow {
    int n = 0;
    std::uint64_t sphere = 0;
    NormEstimate rho;
    HaagerupBound bound;
};

/// (n, |sphere(n)|, rho lower, Haagerup upper) for each scattering index.
inline Report cmd_scatter(const RunConfig& cfg) {
    cfg.validate();
    Report rep;
    rep.command = "scatter";
    rep.config = cfg.to_json();
    auto idx = cfg.indices;
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    std::vector<ScatterRow> rows;
    for (int n : idx) rows.push_back({n, sphere_size(2, n), rho_estimate<CD>(sphere<CD>(n), cfg.radius, cfg.tol), haagerup_bound(n)});

    Json table = Json::array();
    std::string csv = "n,sphere_size,rho_lower,haagerup_upper,radius,iterations\n";
    bool dec = true, below = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        table.push_back({{"n", r.n}, {"sphere_size", r.sphere}, {"rho", to_json(r.rho)}, {"haagerup_upper", r.bound.value},
                         {"haagerup_expr", r.bound.expr}});
        csv += std::to_string(r.n) + "," + std::to_string(r.sphere) + "," + fmt_double(r.rho.lower) + "," + fmt_double(r.bound.value) +
               "," + std::to_string(r.rho.radius) + "," + std::to_string(r.rho.iterations) + "\n";
        if (i > 0 && !(r.bound.value < rows[i - 1].bound.value)) dec = false;
        if (r.rho.lower > r.bound.value * (1 + 1e-12)) below = false;
    }
    rep.sections["table"] = table;
    rep.csv = csv;
    rep.add("scatter.upper_decreasing", dec, "Haagerup bounds strictly decrease");
    rep.add("scatter.lower_below_upper", below, "rho lower <= Haagerup upper");
    return rep;
}

struct EvalResult {
    std::string output;
    int exit_code = 0;
};

/// Evaluates one expression: an S-element (normal form), a Steinberg element (normal
/// form), or an element applied to a germ / arrow (exact value).  Bundle syntax is
/// recognized by the ';' inside chi(...).
inline EvalResult cmd_eval(const std::string& expr) {
    try {
        bool at = expr.find('@') != std::string::npos;
        // The first non-space character after the last '@'.
        char after_at = '\0';
        if (at) {
            std::size_t k = expr.rfind('@') + 1;
            while (k < expr.size() && std::isspace(static_cast<unsigned char>(expr[k]))) ++k;
            if (k < expr.size()) after_at = expr[k];
        }
        bool stein = expr.find("chi(") != std::string::npos || after_at == '[';
        bool bundle = (stein && expr.find(';') != std::string::npos) || after_at == '(' || after_at == 'B' || after_at == 'F';
        if (bundle) {
            // '@B' / '@F' are restriction suffixes; any other '@' applies to an arrow.
            if (after_at == '(') {
                auto [f, a] = parse_bstein_at<HWord>(expr);
                return {to_string(bstein_eval(f, a)), 0};
            }
            return {bstein_str(parse_bstein<HWord>(expr)), 0};
        }
        if (stein) {
            if (at) {
                auto [f, g] = parse_stein_at<HWord>(expr);
                return {to_string(st_eval(f, g)), 0};
            }
            return {stein_str(parse_stein<HWord>(expr)), 0};
        }
        return {parse_selt<HWord>(expr).str(), 0};
    } catch (const ParseError& e) {
        return {e.what(), 2};
    } catch (const std::invalid_argument& e) {
        return {std::string("error: ") + e.what(), 2};
    } catch (const std::domain_error& e) {
        return {std::string("error: ") + e.what(), 2};
    } catch (const std::overflow_error& e) {
        return {std::string("error: ") + e.what(), 2};
    }
}

}  // namespace scatter
