#pragma once

#include "groups.hpp"

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scatter {

enum class Family : std::uint8_t { Y = 0, Z = 1 };

/// y^i_n (integer index) or z^i_k (index in K).
template <WordProblemGroup H = HWord>
struct Letter {
    Family family = Family::Y;
    int channel = 1;
    std::int64_t y = 0;
    KElt<H> k{};

    static Letter Y(int channel, std::int64_t n) {
        if (channel != 1 && channel != 2) throw std::invalid_argument("channel must be 1 or 2");
        return {Family::Y, channel, n, {}};
    }
    static Letter Z(int channel, KElt<H> k) {
        if (channel != 1 && channel != 2) throw std::invalid_argument("channel must be 1 or 2");
        return {Family::Z, channel, 0, std::move(k)};
    }

    bool is_y() const { return family == Family::Y; }
    bool is_z() const { return family == Family::Z; }

    friend bool operator==(const Letter&, const Letter&) = default;
    friend std::strong_ordering operator<=>(const Letter& a, const Letter& b) {
        if (auto c = a.family <=> b.family; c != 0) return c;
        if (auto c = a.channel <=> b.channel; c != 0) return c;
        if (auto c = a.y <=> b.y; c != 0) return c;
        return a.k <=> b.k;
    }

    std::string str() const {
        std::string out = is_y() ? "y" : "z";
        out += std::to_string(channel);
        out += "[";
        out += is_y() ? std::to_string(y) : k.str();
        out += "]";
        return out;
    }
};

template <WordProblemGroup H = HWord>
using FinWord = std::vector<Letter<H>>;

template <WordProblemGroup H>
std::string word_str(const FinWord<H>& w) {
    if (w.empty()) return "eps";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ".";
        out += w[i].str();
    }
    return out;
}

template <WordProblemGroup H>
bool is_prefix(const FinWord<H>& p, const FinWord<H>& w) {
    return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

template <WordProblemGroup H>
FinWord<H> concat(FinWord<H> a, const FinWord<H>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

/// Finite word (empty period) or eventually periodic word head.period^omega.
/// Infinite words are kept with the shortest head and a primitive period.
template <WordProblemGroup H = HWord>
class Word {
public:
    Word() = default;
    Word(FinWord<H> finite) : head_(std::move(finite)) {}
    Word(FinWord<H> head, FinWord<H> period) : head_(std::move(head)), period_(std::move(period)) { canonicalize(); }

    static Word omega(FinWord<H> head, FinWord<H> period) {
        if (period.empty()) throw std::invalid_argument("omega word needs a non-empty period");
        return Word(std::move(head), std::move(period));
    }

    bool finite() const { return period_.empty(); }
    const FinWord<H>& head() const { return head_; }
    const FinWord<H>& period() const { return period_; }

    std::size_t finite_length() const {
        if (!finite()) throw std::logic_error("infinite word has no finite length");
        return head_.size();
    }

    /// Length capped at n (n for infinite words).
    std::size_t length_at_most(std::size_t n) const { return finite() ? std::min(n, head_.size()) : n; }

    const Letter<H>& at(std::size_t i) const {
        if (i < head_.size()) return head_[i];
        if (finite()) throw std::out_of_range("word index past end");
        return period_[(i - head_.size()) % period_.size()];
    }

    FinWord<H> prefix(std::size_t n) const {
        if (finite() && n > head_.size()) throw std::out_of_range("prefix longer than word");
        FinWord<H> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(at(i));
        return out;
    }

    bool has_prefix(const FinWord<H>& p) const {
        if (finite() && p.size() > head_.size()) return false;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (!(at(i) == p[i])) return false;
        return true;
    }

    Word drop(std::size_t n) const {
        if (finite()) {
            if (n > head_.size()) throw std::out_of_range("drop past end");
            return Word(FinWord<H>(head_.begin() + static_cast<std::ptrdiff_t>(n), head_.end()));
        }
        if (n <= head_.size())
            return Word(FinWord<H>(head_.begin() + static_cast<std::ptrdiff_t>(n), head_.end()), period_);
        std::size_t shift = (n - head_.size()) % period_.size();
        FinWord<H> p(period_.begin() + static_cast<std::ptrdiff_t>(shift), period_.end());
        p.insert(p.end(), period_.begin(), period_.begin() + static_cast<std::ptrdiff_t>(shift));
        return Word({}, std::move(p));
    }

    friend Word prepend(const FinWord<H>& a, const Word& w) { return Word(concat(a, w.head_), w.period_); }

    friend bool operator==(const Word&, const Word&) = default;
    friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
        if (auto c = a.head_ <=> b.head_; c != 0) return c;
        return a.period_ <=> b.period_;
    }

    std::string str() const {
        if (finite()) return word_str<H>(head_);
        std::string p = "(" + word_str<H>(period_) + ")^w";
        return head_.empty() ? p : word_str<H>(head_) + "." + p;
    }

private:
    void canonicalize() {
        if (period_.empty()) return;
        const std::size_t p = period_.size();
        for (std::size_t d = 1; d < p; ++d) {
            if (p % d) continue;
            bool ok = true;
            for (std::size_t i = d; i < p && ok; ++i) ok = period_[i] == period_[i - d];
            if (ok) {
                period_.resize(d);
                break;
            }
        }
        while (!head_.empty() && head_.back() == period_.back()) {
            head_.pop_back();
            std::rotate(period_.rbegin(), period_.rbegin() + 1, period_.rend());
        }
    }

    FinWord<H> head_;
    FinWord<H> period_;
};

// ---- the action ------------------------------------------------------------

template <WordProblemGroup H>
Letter<H> act_letter(const GElt<H>& g, const Letter<H>& x) {
    if (x.is_y()) return Letter<H>::Y(x.channel, checked_add(hom_zeta(x.channel, g), x.y));
    return Letter<H>::Z(x.channel, hom_pi(x.channel, g) * x.k);
}

template <WordProblemGroup H>
GElt<H> restrict_letter(const GElt<H>& g, const Letter<H>& x) {
    return x.is_y() ? hom_tau(g) : GElt<H>{};
}

/// (g(alpha), g|_alpha).
template <WordProblemGroup H>
std::pair<FinWord<H>, GElt<H>> act_word(GElt<H> g, const FinWord<H>& alpha) {
    FinWord<H> out;
    out.reserve(alpha.size());
    for (const auto& x : alpha) {
        out.push_back(act_letter(g, x));
        g = restrict_letter(g, x);
    }
    return {std::move(out), std::move(g)};
}

/// Every restriction is trivial after two letters, so only a two-letter prefix moves.
template <WordProblemGroup H>
Word<H> act_on_word(const GElt<H>& g, const Word<H>& w) {
    std::size_t n = w.length_at_most(2);
    auto [moved, rest] = act_word(g, w.prefix(n));
    if (n == 2 && !rest.is_identity()) throw std::logic_error("restriction failed to stabilize");
    return prepend(moved, w.drop(n));
}

// ---- the inverse monoid S ---------------------------------------------------

/// alpha g beta^*, or zero.
template <WordProblemGroup H = HWord>
struct SElt {
    bool zero = false;
    FinWord<H> alpha{};
    GElt<H> g{};
    FinWord<H> beta{};

    static SElt null() { return {true, {}, {}, {}}; }
    static SElt one() { return {}; }
    static SElt group(GElt<H> g) { return {false, {}, std::move(g), {}}; }
    static SElt path(FinWord<H> a) { return {false, std::move(a), {}, {}}; }
    static SElt path_star(FinWord<H> b) { return {false, {}, {}, std::move(b)}; }
    static SElt triple(FinWord<H> a, GElt<H> g, FinWord<H> b) { return {false, std::move(a), std::move(g), std::move(b)}; }

    bool is_zero() const { return zero; }
    bool is_one() const { return !zero && alpha.empty() && beta.empty() && g.is_identity(); }
    bool is_group() const { return !zero && alpha.empty() && beta.empty(); }

    friend bool operator==(const SElt& a, const SElt& b) {
        if (a.zero || b.zero) return a.zero == b.zero;
        return a.alpha == b.alpha && a.g == b.g && a.beta == b.beta;
    }
    friend std::strong_ordering operator<=>(const SElt& a, const SElt& b) {
        if (a.zero || b.zero) return b.zero <=> a.zero;
        if (auto c = a.alpha <=> b.alpha; c != 0) return c;
        if (auto c = a.g <=> b.g; c != 0) return c;
        return a.beta <=> b.beta;
    }

    std::string str() const {
        if (zero) return "0";
        if (is_one()) return "1";
        std::vector<std::string> parts;
        if (!alpha.empty()) parts.push_back(word_str<H>(alpha));
        if (!g.is_identity() || (alpha.empty() && beta.empty())) parts.push_back(g.str());
        if (beta.size() == 1) parts.push_back(beta[0].str() + "*");
        else if (!beta.empty()) parts.push_back("(" + word_str<H>(beta) + ")*");
        std::string out;
        for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " ^ " : "") + parts[i];
        return out;
    }
};

template <WordProblemGroup H>
SElt<H> s_mul(const SElt<H>& s, const SElt<H>& t) {
    if (s.zero || t.zero) return SElt<H>::null();
    if (is_prefix(s.beta, t.alpha)) {
        FinWord<H> gamma(t.alpha.begin() + static_cast<std::ptrdiff_t>(s.beta.size()), t.alpha.end());
        auto [moved, r] = act_word(s.g, gamma);
        return SElt<H>::triple(concat(s.alpha, moved), r * t.g, t.beta);
    }
    if (is_prefix(t.alpha, s.beta)) {
        FinWord<H> gamma(s.beta.begin() + static_cast<std::ptrdiff_t>(t.alpha.size()), s.beta.end());
        // g|_{g^-1(gamma)} = (g^-1|_gamma)^-1
        auto [pulled, r] = act_word(t.g.inverse(), gamma);
        return SElt<H>::triple(s.alpha, s.g * r.inverse(), concat(t.beta, pulled));
    }
    return SElt<H>::null();
}

template <WordProblemGroup H>
SElt<H> s_inv(const SElt<H>& s) {
    if (s.zero) return s;
    return SElt<H>::triple(s.beta, s.g.inverse(), s.alpha);
}

template <WordProblemGroup H>
bool s_defined_at(const SElt<H>& s, const Word<H>& w) {
    return !s.zero && w.has_prefix(s.beta);
}

/// beta w' -> alpha g(w').
template <WordProblemGroup H>
std::optional<Word<H>> s_apply(const SElt<H>& s, const Word<H>& w) {
    if (!s_defined_at(s, w)) return std::nullopt;
    return prepend(s.alpha, act_on_word(s.g, w.drop(s.beta.size())));
}

// ---- germs -------------------------------------------------------------------

template <WordProblemGroup H = HWord>
struct Germ {
    SElt<H> s;
    Word<H> w;
};

/// Depth past which s.gamma and t.gamma stop changing equality status.
template <WordProblemGroup H>
std::size_t germ_depth(const SElt<H>& s, const SElt<H>& t) {
    return std::max(s.beta.size(), t.beta.size()) + 2;
}

template <WordProblemGroup H>
bool germ_eq(const SElt<H>& s, const SElt<H>& t, const Word<H>& w) {
    if (!s_defined_at(s, w) || !s_defined_at(t, w)) throw std::domain_error("germ undefined at word");
    auto gamma = SElt<H>::path(w.prefix(w.length_at_most(germ_depth(s, t))));
    return s_mul(s, gamma) == s_mul(t, gamma);
}

/// Canonical representative of [s,w]: equal keys iff equal germs (for a fixed w).
template <WordProblemGroup H>
SElt<H> germ_key(const SElt<H>& s, const Word<H>& w) {
    if (!s_defined_at(s, w)) throw std::domain_error("germ undefined at word");
    if (w.finite()) return s_mul(s, SElt<H>::path(w.head()));
    std::size_t k = s.beta.size() + 2;
    SElt<H> e = s_mul(s, SElt<H>::path(w.prefix(k)));
    if (!e.g.is_identity() || !e.beta.empty()) throw std::logic_error("restriction failed to stabilize");
    FinWord<H> a = std::move(e.alpha);
    while (k > 0 && !a.empty() && a.back() == w.at(k - 1)) {
        a.pop_back();
        --k;
    }
    return SElt<H>::triple(std::move(a), {}, w.prefix(k));
}

/// Range of a germ: s applied to its source word.
template <WordProblemGroup H>
Word<H> germ_range(const SElt<H>& s, const Word<H>& w) {
    auto r = s_apply(s, w);
    if (!r) throw std::domain_error("germ undefined at word");
    return *r;
}

// ---- minimality / effectiveness -------------------------------------------

enum class FixKind { Cofinite, Finite, Nowhere };

inline const char* fix_kind_name(FixKind k) {
    switch (k) {
        case FixKind::Cofinite: return "cofinite";
        case FixKind::Finite: return "finite";
        case FixKind::Nowhere: return "nowhere";
    }
    return "?";
}

struct FamilyFix {
    FixKind kind = FixKind::Nowhere;
    // Letters excluded from a cofinite fix, or included in a finite one.  Always empty for this action.
    std::vector<std::string> exceptions;
};

/// Families in order y^1, y^2, z^1, z^2.
struct FixReport {
    std::array<FamilyFix, 4> families;
    bool cofinite_everywhere() const {
        return std::all_of(families.begin(), families.end(), [](const FamilyFix& f) { return f.kind == FixKind::Cofinite; });
    }
};

/// Strongly fixing x means g(x) = x and g|_x = 1.  Translations by zeta_i and the free
/// left action of pi_i(g) on K make each family all-or-nothing.
template <WordProblemGroup H>
FixReport strongly_fixed_spectrum(const GElt<H>& g) {
    FixReport r;
    bool tau_trivial = hom_tau(g).is_identity();
    for (int i = 1; i <= 2; ++i) {
        r.families[static_cast<std::size_t>(i - 1)].kind =
            (tau_trivial && hom_zeta(i, g) == 0) ? FixKind::Cofinite : FixKind::Nowhere;
        r.families[static_cast<std::size_t>(i + 1)].kind =
            hom_pi(i, g).is_identity() ? FixKind::Cofinite : FixKind::Nowhere;
    }
    return r;
}

template <WordProblemGroup H>
int effectiveness_witness(const GElt<H>& g) {
    if (g.is_identity()) throw std::invalid_argument("identity has no effectiveness witness");
    return hom_pi(1, g).is_identity() ? 2 : 1;
}

/// Checks g|_{xy} = 1 for every pair of sample letters.
template <WordProblemGroup H>
bool restrictions_stabilize(const GElt<H>& g, const std::vector<Letter<H>>& letters) {
    for (const auto& x : letters)
        for (const auto& y : letters)
            if (!act_word(g, FinWord<H>{x, y}).second.is_identity()) return false;
    return true;
}

}  // namespace scatter
