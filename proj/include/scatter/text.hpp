#pragma once

// Text syntax for letters, words, S-elements, Steinberg elements and bundle objects.
// The grammar is documented in README.md.

#include "bundle.hpp"
#include "steinberg.hpp"

#include <cctype>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scatter {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t pos, const std::string& msg)
        : std::runtime_error("parse error at position " + std::to_string(pos) + ": " + msg), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

namespace detail {

class Cursor {
public:
    explicit Cursor(std::string_view s) : s_(s) {}

    std::size_t pos() const { return i_; }
    void reset(std::size_t p) { i_ = p; }
    bool done() { return i_ >= s_.size(); }
    char peek(std::size_t ahead = 0) const { return i_ + ahead < s_.size() ? s_[i_ + ahead] : '\0'; }
    char get() { return i_ < s_.size() ? s_[i_++] : '\0'; }
    bool at_space() const { return std::isspace(static_cast<unsigned char>(peek())) != 0; }
    void skip_ws() {
        while (at_space()) ++i_;
    }
    bool accept(char c) {
        if (peek() != c) return false;
        ++i_;
        return true;
    }
    bool accept(std::string_view word) {
        if (s_.substr(i_, word.size()) != word) return false;
        i_ += word.size();
        return true;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(i_, msg); }

    std::int64_t integer() {
        std::size_t start = i_;
        bool neg = accept('-');
        if (!neg) accept('+');
        if (!std::isdigit(static_cast<unsigned char>(peek()))) {
            i_ = start;
            fail("expected integer");
        }
        std::int64_t v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            int d = get() - '0';
            if (v > (std::numeric_limits<std::int64_t>::max() - d) / 10) {
                i_ = start;
                fail("integer out of range");
            }
            v = v * 10 + d;
        }
        return neg ? -v : v;
    }

    Rational rational() {
        std::size_t start = i_;
        if (!accept('-')) accept('+');
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++i_;
        if (accept('/'))
            while (std::isdigit(static_cast<unsigned char>(peek()))) ++i_;
        try {
            return parse_rational(s_.substr(start, i_ - start));
        } catch (const std::exception& e) {
            i_ = start;
            fail(e.what());
        }
    }

    void finish() {
        skip_ws();
        if (!done()) fail("unexpected trailing input");
    }

private:
    std::string_view s_;
    std::size_t i_ = 0;
};

template <class A>
bool is_gen_char(char c) {
    return A::names.find(c) != std::string_view::npos;
}

/// gen ('^' int)? ('*'? gen ('^' int)?)*, or "1".
template <class A>
FreeWord<A> free_word(Cursor& c) {
    if (c.peek() == '1' && !std::isdigit(static_cast<unsigned char>(c.peek(1)))) {
        c.get();
        return {};
    }
    if (!is_gen_char<A>(c.peek())) c.fail("expected a word over '" + std::string(A::names) + "'");
    FreeWord<A> w;
    while (true) {
        char g = c.get();
        int power = 1;
        if (c.accept('^')) {
            auto p = c.integer();
            if (p < -1000000 || p > 1000000) c.fail("exponent too large");
            power = static_cast<int>(p);
        }
        w = w * FreeWord<A>::generator(static_cast<int>(A::names.find(g)), power);
        if (c.peek() == '*' && is_gen_char<A>(c.peek(1))) c.get();
        if (!is_gen_char<A>(c.peek())) break;
    }
    return w;
}

template <WordProblemGroup H>
KElt<H> kelt(Cursor& c) {
    using A = typename H::alphabet_type;
    c.expect('(');
    c.skip_ws();
    KElt<H> k;
    k.h = free_word<A>(c);
    c.skip_ws();
    c.expect(',');
    c.skip_ws();
    k.f = free_word<AB>(c);
    c.skip_ws();
    c.expect(',');
    c.skip_ws();
    k.n = c.integer();
    c.skip_ws();
    c.expect(')');
    return k;
}

template <WordProblemGroup H>
GElt<H> gelt(Cursor& c) {
    using A = typename H::alphabet_type;
    c.expect('(');
    c.skip_ws();
    GElt<H> g;
    g.h = free_word<A>(c);
    c.skip_ws();
    c.expect(',');
    c.skip_ws();
    g.f = free_word<AB>(c);
    c.skip_ws();
    c.expect(',');
    c.skip_ws();
    g.n = c.integer();
    c.skip_ws();
    c.expect(',');
    c.skip_ws();
    g.m = c.integer();
    c.skip_ws();
    c.expect(')');
    return g;
}

inline bool letter_ahead(const Cursor& c) {
    char a = c.peek(), b = c.peek(1);
    return (a == 'y' || a == 'z' || a == 'x') && (b == '1' || b == '2') && c.peek(2) == '[';
}

inline bool letter_ahead_after_dot(const Cursor& c) {
    char a = c.peek(1), b = c.peek(2);
    return (a == 'y' || a == 'z' || a == 'x') && (b == '1' || b == '2') && c.peek(3) == '[';
}

template <WordProblemGroup H>
Letter<H> letter(Cursor& c) {
    if (!letter_ahead(c)) c.fail("expected a letter like y1[0] or z2[(1,1,0)]");
    char fam = c.get();
    int ch = c.get() - '0';
    c.expect('[');
    c.skip_ws();
    Letter<H> out;
    bool z = fam == 'z' || (fam == 'x' && c.peek() == '(');
    if (z) out = Letter<H>::Z(ch, kelt<H>(c));
    else out = Letter<H>::Y(ch, c.integer());
    c.skip_ws();
    c.expect(']');
    return out;
}

template <WordProblemGroup H>
FinWord<H> fin_word(Cursor& c) {
    if (c.accept("eps")) return {};
    FinWord<H> w{letter<H>(c)};
    while (c.peek() == '.' && letter_ahead_after_dot(c)) {
        c.get();
        w.push_back(letter<H>(c));
    }
    return w;
}

/// fin_word, optionally followed by ".(period)^w", or just "(period)^w".
template <WordProblemGroup H>
Word<H> word(Cursor& c) {
    FinWord<H> head;
    if (c.peek() != '(') {
        head = fin_word<H>(c);
        if (!(c.peek() == '.' && c.peek(1) == '(')) return Word<H>(head);
        c.get();
    }
    c.expect('(');
    FinWord<H> period = fin_word<H>(c);
    c.expect(')');
    if (!c.accept("^w")) c.fail("expected '^w' after a period");
    if (period.empty()) c.fail("period must be non-empty");
    return Word<H>::omega(head, period);
}

/// Does '(' at the cursor open a 4-tuple (a G element)?
inline int top_level_commas(const Cursor& c) {
    int depth = 0, commas = 0;
    for (std::size_t k = 0;; ++k) {
        char ch = c.peek(k);
        if (ch == '\0') return commas;
        if (ch == '(' || ch == '[') ++depth;
        else if (ch == ')' || ch == ']') {
            if (--depth == 0) return commas;
        } else if (ch == ',' && depth == 1) ++commas;
    }
}

template <WordProblemGroup H>
bool gen_ahead(const Cursor& c) {
    return is_gen_char<typename H::alphabet_type>(c.peek()) || is_gen_char<AB>(c.peek());
}

template <WordProblemGroup H>
bool atom_ahead(const Cursor& c) {
    char ch = c.peek();
    return ch == '(' || ch == '0' || ch == '1' || letter_ahead(c) || gen_ahead<H>(c) || (ch == 'e' && c.peek(1) == 'p');
}

/// A run of generator letters from H's alphabet and {a,b}, as an element of G = H x F x Z x Z.
template <WordProblemGroup H>
GElt<H> mixed_gens(Cursor& c) {
    using A = typename H::alphabet_type;
    GElt<H> g;
    while (true) {
        if (is_gen_char<A>(c.peek())) {
            char ch = c.get();
            int power = 1;
            if (c.accept('^')) power = static_cast<int>(c.integer());
            g.h = g.h * FreeWord<A>::generator(static_cast<int>(A::names.find(ch)), power);
        } else if (is_gen_char<AB>(c.peek())) {
            char ch = c.get();
            int power = 1;
            if (c.accept('^')) power = static_cast<int>(c.integer());
            g.f = g.f * FWord::generator(static_cast<int>(AB::names.find(ch)), power);
        } else {
            break;
        }
        if (c.peek() == '*' && (is_gen_char<A>(c.peek(1)) || is_gen_char<AB>(c.peek(1)))) c.get();
    }
    return g;
}

template <WordProblemGroup H>
SElt<H> s_expr(Cursor& c);

template <WordProblemGroup H>
SElt<H> s_atom(Cursor& c) {
    c.skip_ws();
    SElt<H> out;
    if (c.peek() == '(') {
        if (top_level_commas(c) > 0) {
            out = SElt<H>::group(gelt<H>(c));
        } else {
            c.get();
            out = s_expr<H>(c);
            c.skip_ws();
            c.expect(')');
        }
    } else if (letter_ahead(c)) {
        // One letter per atom, so a postfix '*' binds to the last letter only.
        out = SElt<H>::path({letter<H>(c)});
    } else if (c.accept("eps")) {
        out = SElt<H>::one();
    } else if (c.peek() == '0' && !std::isdigit(static_cast<unsigned char>(c.peek(1)))) {
        c.get();
        out = SElt<H>::null();
    } else if (c.peek() == '1' && !std::isdigit(static_cast<unsigned char>(c.peek(1)))) {
        c.get();
        out = SElt<H>::one();
    } else if (gen_ahead<H>(c)) {
        out = SElt<H>::group(mixed_gens<H>(c));
    } else {
        c.fail("expected an S-element");
    }
    // A '*' glued to the atom and not followed by another atom is the adjoint.
    while (c.peek() == '*') {
        Cursor probe = c;
        probe.get();
        if (atom_ahead<H>(probe)) break;
        c.get();
        out = s_inv(out);
    }
    return out;
}

/// Products with '.', '^' or '*'.
template <WordProblemGroup H>
SElt<H> s_expr(Cursor& c) {
    SElt<H> acc = s_atom<H>(c);
    while (true) {
        std::size_t save = c.pos();
        c.skip_ws();
        char ch = c.peek();
        if (ch == '.' || ch == '^' || ch == '*') {
            c.get();
            acc = s_mul(acc, s_atom<H>(c));
            continue;
        }
        c.reset(save);
        return acc;
    }
}

/// A lone "0" denotes the zero element.
inline bool zero_literal(Cursor& c) {
    if (c.peek() != '0') return false;
    char next = c.peek(1);
    if (std::isdigit(static_cast<unsigned char>(next)) || next == '/' || next == '*' || next == '.') return false;
    c.get();
    return true;
}

template <WordProblemGroup H>
SteinElt<H> stein(Cursor& c) {
    SteinElt<H> f;
    c.skip_ws();
    bool first = true;
    if (zero_literal(c)) first = false;
    while (true) {
        c.skip_ws();
        Rational sign = 1;
        if (c.accept('-')) sign = -1;
        else if (!first && !c.accept('+')) break;
        c.skip_ws();
        Rational coef = 1;
        if (!c.accept("chi(")) {
            if (!std::isdigit(static_cast<unsigned char>(c.peek()))) c.fail("expected a coefficient or 'chi('");
            coef = c.rational();
            c.skip_ws();
            c.expect('*');
            c.skip_ws();
            if (!c.accept("chi(")) c.fail("expected 'chi('");
        }
        SElt<H> s = s_expr<H>(c);
        c.skip_ws();
        c.expect(')');
        f.add_term(s, sign * coef);
        first = false;
        std::size_t save = c.pos();
        c.skip_ws();
        if (c.peek() != '+' && c.peek() != '-') {
            c.reset(save);
            break;
        }
    }
    c.skip_ws();
    if (c.accept('|')) {
        c.skip_ws();
        if (c.accept('B')) f = restrict_region(f, Region::B);
        else if (c.accept('C')) f = restrict_region(f, Region::C);
        else c.fail("expected region B or C");
    }
    return f;
}

// ---- bundle syntax ----------------------------------------------------------------

inline BUnit bunit(Cursor& c) {
    std::size_t start = c.pos();
    try {
        if (c.accept("eps")) return BUnit::eps();
        if (c.accept("x[")) {
            c.skip_ws();
            auto i = c.integer();
            c.skip_ws();
            c.expect(',');
            c.skip_ws();
            auto j = c.integer();
            c.skip_ws();
            c.expect(']');
            return BUnit::x(i, j);
        }
        if (c.accept("y[")) {
            auto i = c.integer();
            c.expect(']');
            return BUnit::y(i);
        }
        if (c.accept("z[")) {
            auto i = c.integer();
            c.expect(']');
            return BUnit::z(i);
        }
    } catch (const std::invalid_argument& e) {
        throw ParseError(start, e.what());
    }
    c.fail("expected a unit x[i,j], y[i], z[i] or eps");
}

inline std::vector<BUnit> bunit_list(Cursor& c) {
    c.expect('{');
    std::vector<BUnit> out;
    c.skip_ws();
    if (c.accept('}')) return out;
    while (true) {
        c.skip_ws();
        out.push_back(bunit(c));
        c.skip_ws();
        if (c.accept('}')) return out;
        c.expect(',');
    }
}

inline BUnitSet bset(Cursor& c);

inline BUnitSet bset_term(Cursor& c) {
    c.skip_ws();
    std::size_t start = c.pos();
    if (c.accept('~')) return bset_term(c).complement();
    if (c.accept("U(")) {
        c.skip_ws();
        BUnitSet out;
        if (c.peek() == 'y') {
            BUnit y = bunit(c);
            if (y.kind != UnitKind::Y) c.fail("expected y[i]");
            c.skip_ws();
            c.expect(';');
            c.skip_ws();
            std::set<std::int64_t> cols;
            for (const auto& x : bunit_list(c)) {
                if (x.kind != UnitKind::X || x.i != y.i) throw ParseError(start, "removed points must lie in the column of " + y.str());
                cols.insert(x.j);
            }
            out = BUnitSet::y_cylinder(y.i, cols);
        } else {
            std::set<std::int64_t> fy, fz;
            for (const auto& u : bunit_list(c)) {
                if (u.kind != UnitKind::Y) throw ParseError(start, "first list takes y[i] units");
                fy.insert(u.i);
            }
            c.skip_ws();
            c.expect(';');
            c.skip_ws();
            for (const auto& u : bunit_list(c)) {
                if (u.kind != UnitKind::Z) throw ParseError(start, "second list takes z[i] units");
                fz.insert(u.i);
            }
            out = BUnitSet::cofinite(fy, fz);
        }
        c.skip_ws();
        c.expect(')');
        return out;
    }
    if (c.peek() == '{') {
        BUnitSet out;
        for (const auto& u : bunit_list(c)) {
            if (u.kind != UnitKind::X && u.kind != UnitKind::Z) throw ParseError(start, "only x and z points are open");
            out = out | BUnitSet::point(u);
        }
        return out;
    }
    if (c.accept('(')) {
        auto out = bset(c);
        c.skip_ws();
        c.expect(')');
        return out;
    }
    c.fail("expected a unit set");
}

/// Left-associative chain of '|', '&', '\'.
inline BUnitSet bset(Cursor& c) {
    BUnitSet acc = bset_term(c);
    while (true) {
        std::size_t save = c.pos();
        c.skip_ws();
        if (c.accept('|')) acc = acc | bset_term(c);
        else if (c.accept('&')) acc = acc & bset_term(c);
        else if (c.accept('\\')) acc = acc - bset_term(c);
        else {
            c.reset(save);
            return acc;
        }
    }
}

template <WordProblemGroup H>
BGroup<H> bgroup(Cursor& c) {
    c.expect('(');
    c.skip_ws();
    auto n = c.integer();
    if (n != 0 && n != 1) c.fail("Z_2 component must be 0 or 1");
    c.skip_ws();
    c.expect(',');
    c.skip_ws();
    BGroup<H> g{static_cast<int>(n), free_word<typename H::alphabet_type>(c)};
    c.skip_ws();
    c.expect(')');
    return g;
}

template <WordProblemGroup H>
BArrow<H> barrow(Cursor& c) {
    auto g = bgroup<H>(c);
    c.skip_ws();
    c.expect(':');
    c.skip_ws();
    return BArrow<H>::make(g.n, g.h, bunit(c));
}

template <WordProblemGroup H>
BSteinElt<H> bstein(Cursor& c) {
    BSteinElt<H> f;
    c.skip_ws();
    bool first = true;
    if (zero_literal(c)) first = false;
    while (true) {
        c.skip_ws();
        Rational sign = 1;
        if (c.accept('-')) sign = -1;
        else if (!first && !c.accept('+')) break;
        c.skip_ws();
        Rational coef = 1;
        if (!c.accept("chi(")) {
            if (!std::isdigit(static_cast<unsigned char>(c.peek()))) c.fail("expected a coefficient or 'chi('");
            coef = c.rational();
            c.skip_ws();
            c.expect('*');
            c.skip_ws();
            if (!c.accept("chi(")) c.fail("expected 'chi('");
        }
        c.skip_ws();
        auto g = bgroup<H>(c);
        c.skip_ws();
        c.expect(';');
        auto u = bset(c);
        c.skip_ws();
        c.expect(')');
        f.add_term(g, u, sign * coef);
        first = false;
        std::size_t save = c.pos();
        c.skip_ws();
        if (c.peek() != '+' && c.peek() != '-') {
            c.reset(save);
            break;
        }
    }
    std::size_t save = c.pos();
    c.skip_ws();
    if (c.accept('@')) {
        c.skip_ws();
        if (c.accept('B')) {
            if (!f.terms.empty()) f.restrict = BRestrict::B;
            return f;
        }
        if (c.accept('F')) return bundle_restrict_F(f);
    }
    c.reset(save);
    return f;
}

}  // namespace detail

// ---- public entry points ----------------------------------------------------------

template <class F>
auto parse_all(std::string_view text, F&& body) {
    detail::Cursor c(text);
    c.skip_ws();
    auto out = body(c);
    c.finish();
    return out;
}

template <WordProblemGroup H = HWord>
FreeWord<typename H::alphabet_type> parse_h(std::string_view t) {
    return parse_all(t, [](detail::Cursor& c) { return detail::free_word<typename H::alphabet_type>(c); });
}
inline FWord parse_f(std::string_view t) {
    return parse_all(t, [](detail::Cursor& c) { return detail::free_word<AB>(c); });
}
template <WordProblemGroup H = HWord>
GElt<H> parse_gelt(std::string_view t) {
    return parse_all(t, [](detail::Cursor& c) { return detail::gelt<H>(c); });
}
template <WordProblemGroup H = HWord>
KElt<H> parse_kelt(std::string_view t) {
    return parse_all(t, [](detail::Cursor& c) { return detail::kelt<H>(c); });
}
template <WordProblemGroup H = HWord>
Letter<H> parse_letter(std::string_view t) {
    return parse_all(t, [](detail::Cursor& c) { return detail::letter<H>(c); });
}
template <WordProblemGroup H = HWord>
Word<H> parse_word(std::string_view t) {
    return parse_all(t, [](detail::Cursor& c) { return detail::word<H>(c); });
}
template <WordProblemGroup H = HWord>
SElt<H> parse_selt(std::string_view t) {
    return parse_all(t, [](detail::Cursor& c) { return detail::s_expr<H>(c); });
}
template <WordProblemGroup H = HWord>
SteinElt<H> parse_stein(std::string_view t) {
    return parse_all(t, [](detail::Cursor& c) { return detail::stein<H>(c); });
}

/// "f @ [s, w]": a Steinberg element and a germ.
template <WordProblemGroup H = HWord>
std::pair<SteinElt<H>, Germ<H>> parse_stein_at(std::string_view t) {
    return parse_all(t, [](detail::Cursor& c) {
        auto f = detail::stein<H>(c);
        c.skip_ws();
        c.expect('@');
        c.skip_ws();
        c.expect('[');
        c.skip_ws();
        auto s = detail::s_expr<H>(c);
        c.skip_ws();
        c.expect(',');
        c.skip_ws();
        auto w = detail::word<H>(c);
        c.skip_ws();
        c.expect(']');
        return std::make_pair(f, Germ<H>{s, w});
    });
}

inline BUnit parse_bunit(std::string_view t) {
    return parse_all(t, [](detail::Cursor& c) { return detail::bunit(c); });
}
inline BUnitSet parse_bset(std::string_view t) {
    return parse_all(t, [](detail::Cursor& c) { return detail::bset(c); });
}
template <WordProblemGroup H = HWord>
BArrow<H> parse_barrow(std::string_view t) {
    return parse_all(t, [](detail::Cursor& c) { return detail::barrow<H>(c); });
}
template <WordProblemGroup H = HWord>
BSteinElt<H> parse_bstein(std::string_view t) {
    return parse_all(t, [](detail::Cursor& c) { return detail::bstein<H>(c); });
}
template <WordProblemGroup H = HWord>
std::pair<BSteinElt<H>, BArrow<H>> parse_bstein_at(std::string_view t) {
    return parse_all(t, [](detail::Cursor& c) {
        auto f = detail::bstein<H>(c);
        c.skip_ws();
        c.expect('@');
        c.skip_ws();
        return std::make_pair(f, detail::barrow<H>(c));
    });
}

// ---- printers ----------------------------------------------------------------------

inline std::string coef_prefix(const Rational& c, bool first) {
    std::string out;
    Rational a = abs(c);
    if (first) out = c < 0 ? "-" : "";
    else out = c < 0 ? " - " : " + ";
    return out + to_string(a) + "*";
}

template <WordProblemGroup H>
std::string stein_str(const SteinElt<H>& f) {
    if (f.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [s, c] : f.terms) {
        out += coef_prefix(c, first) + "chi(" + s.str() + ")";
        first = false;
    }
    if (f.region != Region::Full) out += std::string(" |") + region_name(f.region);
    return out;
}

template <WordProblemGroup H>
std::string bstein_str(const BSteinElt<H>& f) {
    if (f.terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : f.terms) {
        out += coef_prefix(c, first) + "chi(" + k.first.str() + ";" + k.second.str() + ")";
        first = false;
    }
    if (f.restrict == BRestrict::B) out += " @B";
    if (f.restrict == BRestrict::F) out += " @F";
    return out;
}

}  // namespace scatter
