#pragma once

#include "rational.hpp"
#include "selfsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scatter {

/// Symbolic unit-space restriction.  B = union of D(y), C = union of D(z).
enum class Region { Full, B, C };

inline const char* region_name(Region r) {
    switch (r) {
        case Region::Full: return "full";
        case Region::B: return "B";
        case Region::C: return "C";
    }
    return "?";
}

template <WordProblemGroup H>
bool region_contains(Region r, const Word<H>& w) {
    if (r == Region::Full) return true;
    if (w.length_at_most(1) == 0) return false;
    return r == Region::B ? w.at(0).is_y() : w.at(0).is_z();
}

/// Sum of c_s * chi_(s, D(s^*s)), optionally followed by chi_B or chi_C.
template <WordProblemGroup H = HWord>
struct SteinElt {
    std::map<SElt<H>, Rational> terms;
    Region region = Region::Full;

    static SteinElt chi(const SElt<H>& s, const Rational& c = 1) {
        SteinElt f;
        f.add_term(s, c);
        return f;
    }

    void add_term(const SElt<H>& s, const Rational& c) {
        if (s.zero || c == 0) return;
        auto [it, fresh] = terms.emplace(s, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }

    bool is_zero() const { return terms.empty(); }
    std::size_t max_beta() const {
        std::size_t m = 0;
        for (const auto& [s, c] : terms) m = std::max(m, s.beta.size());
        return m;
    }

    friend bool operator==(const SteinElt& a, const SteinElt& b) {
        if (a.is_zero() && b.is_zero()) return true;
        return a.region == b.region && a.terms == b.terms;
    }

    friend SteinElt operator+(SteinElt a, const SteinElt& b) {
        if (a.is_zero()) return b;
        if (!b.is_zero() && a.region != b.region) throw std::invalid_argument("cannot add elements with different regions");
        for (const auto& [s, c] : b.terms) a.add_term(s, c);
        return a;
    }
    friend SteinElt operator*(const Rational& q, SteinElt a) {
        if (q == 0) return SteinElt{};
        for (auto& [s, c] : a.terms) c *= q;
        return a;
    }
    friend SteinElt operator-(const SteinElt& a, const SteinElt& b) { return a + Rational(-1) * b; }
};

template <WordProblemGroup H>
SteinElt<H> restrict_region(SteinElt<H> f, Region r) {
    if (f.is_zero()) return SteinElt<H>{};
    if (f.region != Region::Full && f.region != r) {
        if (r == Region::Full) return f;
        return SteinElt<H>{};
    }
    f.region = r;
    return f;
}

template <WordProblemGroup H>
SteinElt<H> st_conv(const SteinElt<H>& f, const SteinElt<H>& g) {
    if (f.region != Region::Full)
        throw std::invalid_argument("left convolution operand must be unrestricted");
    SteinElt<H> out;
    out.region = g.region;
    for (const auto& [s, c] : f.terms)
        for (const auto& [t, d] : g.terms) out.add_term(s_mul(s, t), c * d);
    if (out.is_zero()) out.region = Region::Full;
    return out;
}

template <WordProblemGroup H>
SteinElt<H> st_star(const SteinElt<H>& f) {
    if (f.region != Region::Full) throw std::invalid_argument("adjoint of a restricted element is not supported");
    SteinElt<H> out;
    for (const auto& [s, c] : f.terms) out.add_term(s_inv(s), c);  // coefficients are real
    return out;
}

/// f([t,w]).
template <WordProblemGroup H>
Rational st_eval(const SteinElt<H>& f, const SElt<H>& t, const Word<H>& w) {
    if (!s_defined_at(t, w)) throw std::domain_error("germ undefined at word");
    if (!region_contains(f.region, w)) return 0;
    const SElt<H> key = germ_key(t, w);
    Rational sum = 0;
    for (const auto& [s, c] : f.terms)
        if (s_defined_at(s, w) && germ_key(s, w) == key) sum += c;
    return sum;
}

template <WordProblemGroup H>
Rational st_eval(const SteinElt<H>& f, const Germ<H>& germ) { return st_eval(f, germ.s, germ.w); }

// ---- the paper's named elements -------------------------------------------------

/// chi_1 - chi_a - chi_b + chi_ab.
template <WordProblemGroup H = HWord>
SteinElt<H> selfsim_a() {
    auto a = GElt<H>::from_f(FWord::generator(0));
    auto b = GElt<H>::from_f(FWord::generator(1));
    SteinElt<H> f;
    f.add_term(SElt<H>::one(), 1);
    f.add_term(SElt<H>::group(a), -1);
    f.add_term(SElt<H>::group(b), -1);
    f.add_term(SElt<H>::group(a * b), 1);
    return f;
}

/// Uniform average of chi_(h, D(eps)) over hs.
template <WordProblemGroup H>
SteinElt<H> selfsim_average(const std::vector<H>& hs) {
    if (hs.empty()) throw std::invalid_argument("empty scattering set");
    SteinElt<H> f;
    Rational c(1, static_cast<long long>(hs.size()));
    for (const auto& h : hs) f.add_term(SElt<H>::group(GElt<H>::from_h(h)), c);
    return f;
}

inline SteinElt<HWord> selfsim_bn(int n) { return selfsim_average(sphere<CD>(n)); }

template <WordProblemGroup H = HWord>
SteinElt<H> selfsim_chiB() { return restrict_region(SteinElt<H>::chi(SElt<H>::one()), Region::B); }

// ---- stratification ---------------------------------------------------------------

/// A pattern position: a specific letter, or any letter of a family outside the exceptional set.
template <WordProblemGroup H = HWord>
struct Symbol {
    bool generic = false;
    Family family = Family::Y;
    int channel = 1;
    Letter<H> letter{};

    friend bool operator==(const Symbol&, const Symbol&) = default;
    friend std::strong_ordering operator<=>(const Symbol& a, const Symbol& b) {
        if (auto c = a.generic <=> b.generic; c != 0) return c;
        if (a.generic) {
            if (auto c = a.family <=> b.family; c != 0) return c;
            return a.channel <=> b.channel;
        }
        return a.letter <=> b.letter;
    }
    bool is_y() const { return generic ? family == Family::Y : letter.is_y(); }
    bool is_z() const { return !is_y(); }
    std::string str() const {
        if (!generic) return letter.str();
        return std::string(family == Family::Y ? "Y" : "Z") + std::to_string(channel);
    }
};

template <WordProblemGroup H = HWord>
struct SupportStratum {
    std::vector<Symbol<H>> pattern;
    bool cylinder = false;   // all words extending the pattern, else the single finite word
    FinWord<H> representative;
    SElt<H> base;            // least term in the germ class
    Rational value;
    bool interior = false;   // contains the basic bisection (base, D(pattern))

    std::string pattern_str() const {
        std::string p;
        for (std::size_t i = 0; i < pattern.size(); ++i) p += (i ? "." : "") + pattern[i].str();
        if (p.empty()) p = "eps";
        return cylinder ? "D(" + p + ")" : p;
    }
};

template <WordProblemGroup H = HWord>
struct Stratification {
    bool complete = true;  // false when the pattern budget ran out
    std::size_t depth = 0;
    std::size_t patterns = 0;
    std::vector<SupportStratum<H>> strata;
};

inline constexpr std::size_t default_pattern_budget = 200000;

/// Exceptional letters: every beta letter, and every h^-1(a) for alpha letters a and
/// h in {g, tau(g), 1} over all terms.  Outside these, values are constant per family.
template <WordProblemGroup H>
std::vector<Letter<H>> exceptional_letters(const std::vector<const SteinElt<H>*>& parts) {
    std::set<Letter<H>> ex;
    std::set<GElt<H>> movers{GElt<H>{}};
    std::set<Letter<H>> alphas;
    for (const auto* f : parts)
        for (const auto& [s, c] : f->terms) {
            ex.insert(s.beta.begin(), s.beta.end());
            alphas.insert(s.alpha.begin(), s.alpha.end());
            movers.insert(s.g);
            movers.insert(hom_tau(s.g));
        }
    for (const auto& a : alphas)
        for (const auto& h : movers) ex.insert(act_letter(h.inverse(), a));
    return {ex.begin(), ex.end()};
}

/// Stratifies the germ support of sum_i weight_i * f_i.
template <WordProblemGroup H>
Stratification<H> stratify(const std::vector<std::pair<const SteinElt<H>*, Rational>>& parts,
                           std::size_t budget = default_pattern_budget) {
    Stratification<H> out;
    std::vector<const SteinElt<H>*> elems;
    std::size_t maxb = 0;
    std::set<FinWord<H>> betas;
    for (const auto& [f, w] : parts) {
        elems.push_back(f);
        maxb = std::max(maxb, f->max_beta());
        for (const auto& [s, c] : f->terms) betas.insert(s.beta);
    }
    const std::size_t L = maxb + 2;
    out.depth = L;
    if (betas.empty()) return out;

    auto ex = exceptional_letters(elems);
    std::int64_t ybound = 0, zbound = 0;
    for (const auto& x : ex) {
        if (x.is_y()) ybound = std::max(ybound, x.y < 0 ? -x.y : x.y);
        else zbound = std::max(zbound, x.k.n < 0 ? -x.k.n : x.k.n);
    }
    std::vector<Symbol<H>> alphabet;
    for (const auto& x : ex) alphabet.push_back({false, x.family, x.channel, x});
    for (int ch = 1; ch <= 2; ++ch) alphabet.push_back({true, Family::Y, ch, Letter<H>::Y(ch, ybound + 1)});
    for (int ch = 1; ch <= 2; ++ch)
        alphabet.push_back({true, Family::Z, ch, Letter<H>::Z(ch, KElt<H>{{}, {}, zbound + 1})});

    // Budget check before enumerating.
    {
        long double total = 0;
        for (const auto& b : betas)
            for (std::size_t j = 0; j + b.size() <= L; ++j) total += std::pow(static_cast<long double>(alphabet.size()), j);
        if (total > static_cast<long double>(budget)) {
            out.complete = false;
            return out;
        }
    }

    std::set<std::vector<Symbol<H>>> patterns;
    for (const auto& b : betas) {
        std::vector<Symbol<H>> base;
        for (const auto& x : b) base.push_back({false, x.family, x.channel, x});
        std::vector<std::vector<Symbol<H>>> layer{base};
        while (true) {
            for (const auto& p : layer) patterns.insert(p);
            if (layer.front().size() >= L) break;
            std::vector<std::vector<Symbol<H>>> next;
            next.reserve(layer.size() * alphabet.size());
            for (const auto& p : layer)
                for (const auto& sym : alphabet) {
                    auto q = p;
                    q.push_back(sym);
                    next.push_back(std::move(q));
                }
            layer = std::move(next);
        }
    }
    out.patterns = patterns.size();

    for (const auto& p : patterns) {
        FinWord<H> rep;
        for (const auto& sym : p) rep.push_back(sym.letter);
        const Word<H> w(rep);
        std::map<SElt<H>, std::pair<Rational, SElt<H>>> classes;
        for (const auto& [f, weight] : parts) {
            if (!region_contains(f->region, w)) continue;
            for (const auto& [s, c] : f->terms) {
                if (!s_defined_at(s, w)) continue;
                auto key = germ_key(s, w);
                auto it = classes.find(key);
                if (it == classes.end()) classes.emplace(key, std::make_pair(weight * c, s));
                else {
                    it->second.first += weight * c;
                    if (s < it->second.second) it->second.second = s;
                }
            }
        }
        for (auto& [key, vc] : classes) {
            if (vc.first == 0) continue;
            SupportStratum<H> st;
            st.pattern = p;
            st.cylinder = p.size() == L;
            st.representative = rep;
            st.base = vc.second;
            st.value = vc.first;
            st.interior = st.cylinder;
            out.strata.push_back(std::move(st));
        }
    }
    return out;
}

template <WordProblemGroup H>
std::vector<SupportStratum<H>> st_support_strata(const SteinElt<H>& f) {
    auto s = stratify<H>({{&f, Rational(1)}});
    if (!s.complete) throw std::runtime_error("stratification budget exceeded");
    return s.strata;
}

/// Exact sup |f - g| over all germs.
template <WordProblemGroup H>
Rational st_sup_dist(const SteinElt<H>& f, const SteinElt<H>& g) {
    auto s = stratify<H>({{&f, Rational(1)}, {&g, Rational(-1)}});
    if (!s.complete) throw std::runtime_error("stratification budget exceeded");
    Rational m = 0;
    for (const auto& st : s.strata) m = std::max(m, abs(st.value));
    return m;
}

// ---- open witnesses ---------------------------------------------------------------

template <WordProblemGroup H = HWord>
struct OpenWitness {
    GElt<H> h;
    int channel = 1;
    std::vector<KElt<H>> excluded;
    Rational floor;
};

/// k is atypical when some term's beta starts with z^1_k or z^2_k.
template <WordProblemGroup H>
std::vector<KElt<H>> atypical_k(const SteinElt<H>& f) {
    std::set<KElt<H>> out;
    for (const auto& [s, c] : f.terms)
        if (!s.beta.empty() && s.beta.front().is_z()) out.insert(s.beta.front().k);
    return {out.begin(), out.end()};
}

/// Coset sums of the group-element terms over G_i / Z_i, G_i = ker tau n ker zeta_i,
/// Z_i = ker pi_i.  The first nonzero coset (by pi_i key) gives h with
/// f([h, z^i_k w]) = coset sum for every typical k and every tail w.
template <WordProblemGroup H>
std::optional<OpenWitness<H>> st_open_witness(const SteinElt<H>& f) {
    if (f.region != Region::Full) return std::nullopt;
    for (int i = 1; i <= 2; ++i) {
        std::map<KElt<H>, std::pair<Rational, GElt<H>>> cosets;
        for (const auto& [s, c] : f.terms) {
            if (!s.is_group()) continue;
            if (!hom_tau(s.g).is_identity() || hom_zeta(i, s.g) != 0) continue;
            auto key = hom_pi(i, s.g);
            auto it = cosets.find(key);
            if (it == cosets.end()) cosets.emplace(key, std::make_pair(c, s.g));
            else {
                it->second.first += c;
                if (s.g < it->second.second) it->second.second = s.g;
            }
        }
        for (const auto& [key, sum_h] : cosets) {
            if (sum_h.first == 0) continue;
            return OpenWitness<H>{sum_h.second, i, atypical_k(f), abs(sum_h.first)};
        }
    }
    return std::nullopt;
}

template <WordProblemGroup H>
bool witness_excludes(const OpenWitness<H>& wit, const KElt<H>& k) {
    return std::binary_search(wit.excluded.begin(), wit.excluded.end(), k);
}

// ---- singularity --------------------------------------------------------------------

enum class Verdict { Singular, Nonsingular, Unknown };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Singular: return "singular";
        case Verdict::Nonsingular: return "nonsingular";
        case Verdict::Unknown: return "unknown";
    }
    return "?";
}

template <WordProblemGroup H = HWord>
struct SingularityReport {
    Verdict verdict = Verdict::Unknown;
    std::vector<SupportStratum<H>> strata;
    std::optional<SupportStratum<H>> open_stratum;
    std::optional<OpenWitness<H>> witness;
};

/// Singular iff no cylinder stratum carries a nonzero value.
template <WordProblemGroup H>
SingularityReport<H> st_is_singular(const SteinElt<H>& f, std::size_t budget = default_pattern_budget) {
    SingularityReport<H> r;
    auto s = stratify<H>({{&f, Rational(1)}}, budget);
    if (!s.complete) return r;
    r.strata = std::move(s.strata);
    for (const auto& st : r.strata)
        if (st.interior) {
            r.open_stratum = st;
            break;
        }
    if (!r.open_stratum) {
        r.verdict = Verdict::Singular;
        return r;
    }
    r.verdict = Verdict::Nonsingular;
    r.witness = st_open_witness(f);
    return r;
}

}  // namespace scatter
