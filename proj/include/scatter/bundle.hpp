#pragma once

// The bundle of groups over X u Y u Z u {eps}: isotropy trivial over X, Z_2 over Y,
// Z_2 x H over Z and eps.

#include "free_group.hpp"
#include "rational.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scatter {

enum class UnitKind : std::uint8_t { X = 0, Y = 1, Z = 2, Eps = 3 };

struct BUnit {
    UnitKind kind = UnitKind::Eps;
    std::int64_t i = 0;
    std::int64_t j = 0;

    static BUnit x(std::int64_t i, std::int64_t j) {
        if (i < 1 || j < 1) throw std::invalid_argument("unit indices start at 1");
        return {UnitKind::X, i, j};
    }
    static BUnit y(std::int64_t i) {
        if (i < 1) throw std::invalid_argument("unit indices start at 1");
        return {UnitKind::Y, i, 0};
    }
    static BUnit z(std::int64_t i) {
        if (i < 1) throw std::invalid_argument("unit indices start at 1");
        return {UnitKind::Z, i, 0};
    }
    static BUnit eps() { return {}; }

    friend bool operator==(const BUnit&, const BUnit&) = default;
    friend auto operator<=>(const BUnit&, const BUnit&) = default;

    std::string str() const {
        switch (kind) {
            case UnitKind::X: return "x[" + std::to_string(i) + "," + std::to_string(j) + "]";
            case UnitKind::Y: return "y[" + std::to_string(i) + "]";
            case UnitKind::Z: return "z[" + std::to_string(i) + "]";
            case UnitKind::Eps: return "eps";
        }
        return "?";
    }
};

/// Compact open unit set, stored as toggles against a default:
///   eps in U      iff eps
///   y_i in U      iff eps xor (i in ys)
///   z_i in U      iff eps xor (i in zs)
///   x_ij in U     iff (y_i in U) xor ((i,j) in xs)
/// Finitely many toggles is exactly compactness; the form is unique per set.
class BUnitSet {
public:
    using XIndex = std::pair<std::int64_t, std::int64_t>;

    static BUnitSet empty() { return {}; }
    static BUnitSet whole() {
        BUnitSet u;
        u.eps_ = true;
        return u;
    }
    /// {x} or {z}; other singletons are not open.
    static BUnitSet point(const BUnit& p) {
        BUnitSet u;
        if (p.kind == UnitKind::X) u.xs_.insert({p.i, p.j});
        else if (p.kind == UnitKind::Z) u.zs_.insert(p.i);
        else throw std::invalid_argument("only x and z points are open");
        return u;
    }
    /// {y_i} u X_i \ F.
    static BUnitSet y_cylinder(std::int64_t i, const std::set<std::int64_t>& removed_columns) {
        if (i < 1) throw std::invalid_argument("unit indices start at 1");
        BUnitSet u;
        u.ys_.insert(i);
        for (auto j : removed_columns) {
            if (j < 1) throw std::invalid_argument("unit indices start at 1");
            u.xs_.insert({i, j});
        }
        return u;
    }
    /// Everything except the y-cylinders over fy and the points fz.
    static BUnitSet cofinite(const std::set<std::int64_t>& fy, const std::set<std::int64_t>& fz) {
        BUnitSet u;
        u.eps_ = true;
        for (auto i : fy) {
            if (i < 1) throw std::invalid_argument("unit indices start at 1");
            u.ys_.insert(i);
        }
        for (auto i : fz) {
            if (i < 1) throw std::invalid_argument("unit indices start at 1");
            u.zs_.insert(i);
        }
        return u;
    }

    bool contains(const BUnit& p) const {
        switch (p.kind) {
            case UnitKind::Eps: return eps_;
            case UnitKind::Y: return eps_ != (ys_.count(p.i) > 0);
            case UnitKind::Z: return eps_ != (zs_.count(p.i) > 0);
            case UnitKind::X: return contains(BUnit{UnitKind::Y, p.i, 0}) != (xs_.count({p.i, p.j}) > 0);
        }
        return false;
    }

    bool has_eps() const { return eps_; }
    const std::set<std::int64_t>& y_toggles() const { return ys_; }
    const std::set<std::int64_t>& z_toggles() const { return zs_; }
    const std::set<XIndex>& x_toggles() const { return xs_; }
    bool is_empty() const { return !eps_ && ys_.empty() && zs_.empty() && xs_.empty(); }

    BUnitSet complement() const {
        BUnitSet u = *this;
        u.eps_ = !eps_;
        return u;
    }

    template <class Op>
    static BUnitSet combine(const BUnitSet& a, const BUnitSet& b, Op op) {
        BUnitSet u;
        u.eps_ = op(a.eps_, b.eps_);
        std::set<std::int64_t> yi = a.ys_, zi = a.zs_;
        yi.insert(b.ys_.begin(), b.ys_.end());
        zi.insert(b.zs_.begin(), b.zs_.end());
        std::set<XIndex> xi = a.xs_;
        xi.insert(b.xs_.begin(), b.xs_.end());
        for (const auto& [i, j] : xi) yi.insert(i);
        for (auto i : yi) {
            BUnit p{UnitKind::Y, i, 0};
            if (op(a.contains(p), b.contains(p)) != u.eps_) u.ys_.insert(i);
        }
        for (auto i : zi) {
            BUnit p{UnitKind::Z, i, 0};
            if (op(a.contains(p), b.contains(p)) != u.eps_) u.zs_.insert(i);
        }
        for (const auto& [i, j] : xi) {
            BUnit p{UnitKind::X, i, j};
            if (op(a.contains(p), b.contains(p)) != u.contains(BUnit{UnitKind::Y, i, 0})) u.xs_.insert({i, j});
        }
        return u;
    }

    friend BUnitSet operator&(const BUnitSet& a, const BUnitSet& b) {
        return combine(a, b, [](bool p, bool q) { return p && q; });
    }
    friend BUnitSet operator|(const BUnitSet& a, const BUnitSet& b) {
        return combine(a, b, [](bool p, bool q) { return p || q; });
    }
    friend BUnitSet operator-(const BUnitSet& a, const BUnitSet& b) {
        return combine(a, b, [](bool p, bool q) { return p && !q; });
    }

    friend bool operator==(const BUnitSet&, const BUnitSet&) = default;
    friend auto operator<=>(const BUnitSet&, const BUnitSet&) = default;

    /// Canonical text, parseable back by the set grammar.
    std::string str() const {
        auto set_of = [](const std::vector<std::string>& items) {
            std::string s = "{";
            for (std::size_t k = 0; k < items.size(); ++k) s += (k ? "," : "") + items[k];
            return s + "}";
        };
        std::vector<std::string> in_cols, out_cols;
        for (const auto& [i, j] : xs_) {
            bool col = contains(BUnit{UnitKind::Y, i, 0});
            (col ? out_cols : in_cols).push_back(BUnit{UnitKind::X, i, j}.str());
        }
        std::string out;
        if (eps_) {
            std::vector<std::string> fy, fz;
            for (auto i : ys_) fy.push_back(BUnit{UnitKind::Y, i, 0}.str());
            for (auto i : zs_) fz.push_back(BUnit{UnitKind::Z, i, 0}.str());
            out = "U(" + set_of(fy) + ";" + set_of(fz) + ")";
            if (!out_cols.empty()) out += " \\ " + set_of(out_cols);
            if (!in_cols.empty()) out += " | " + set_of(in_cols);
            return out;
        }
        std::vector<std::string> parts;
        for (auto i : ys_) {
            std::vector<std::string> f;
            for (auto it = xs_.lower_bound({i, 0}); it != xs_.end() && it->first == i; ++it)
                f.push_back(BUnit{UnitKind::X, i, it->second}.str());
            parts.push_back("U(" + BUnit{UnitKind::Y, i, 0}.str() + ";" + set_of(f) + ")");
        }
        std::vector<std::string> pts = in_cols;
        for (auto i : zs_) pts.push_back(BUnit{UnitKind::Z, i, 0}.str());
        if (!pts.empty() || parts.empty()) parts.push_back(set_of(pts));
        for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? " | " : "") + parts[k];
        return out;
    }

private:
    bool eps_ = false;
    std::set<std::int64_t> ys_;
    std::set<std::int64_t> zs_;
    std::set<XIndex> xs_;
};

inline BUnitSet buset_intersect(const BUnitSet& u, const BUnitSet& v) { return u & v; }
inline bool buset_member(const BUnit& p, const BUnitSet& u) { return u.contains(p); }

/// Element (n, h) of Z_2 x H.
template <WordProblemGroup H = HWord>
struct BGroup {
    int n = 0;
    H h{};

    BGroup inverse() const { return {n, h.inverse()}; }
    bool is_identity() const { return n == 0 && h.is_identity(); }
    friend BGroup operator*(const BGroup& a, const BGroup& b) { return {(a.n + b.n) % 2, a.h * b.h}; }
    friend bool operator==(const BGroup&, const BGroup&) = default;
    friend std::strong_ordering operator<=>(const BGroup& a, const BGroup& b) {
        if (auto c = a.n <=> b.n; c != 0) return c;
        return a.h <=> b.h;
    }
    std::string str() const { return "(" + std::to_string(n) + "," + h.str() + ")"; }
};

/// Arrow (n,h) over u, canonicalized: over X the group part is trivial, over Y only n survives.
template <WordProblemGroup H = HWord>
struct BArrow {
    BGroup<H> g{};
    BUnit u{};

    static BArrow make(int n, H h, BUnit u) {
        if (n != 0 && n != 1) throw std::invalid_argument("Z_2 component must be 0 or 1");
        if (u.kind == UnitKind::X) return {{0, H{}}, u};
        if (u.kind == UnitKind::Y) return {{n, H{}}, u};
        return {{n, std::move(h)}, u};
    }

    friend bool operator==(const BArrow&, const BArrow&) = default;
    friend std::strong_ordering operator<=>(const BArrow& a, const BArrow& b) {
        if (auto c = a.u <=> b.u; c != 0) return c;
        return a.g <=> b.g;
    }
    std::string str() const { return g.str() + ":" + u.str(); }
};

/// Does U_g contain the arrow (over its unit)?
template <WordProblemGroup H>
bool bisection_hits(const BGroup<H>& g, const BArrow<H>& a) {
    switch (a.u.kind) {
        case UnitKind::X: return true;
        case UnitKind::Y: return g.n == a.g.n;
        default: return g == a.g;
    }
}

/// Restriction to the open set B = X u Y, or to the closed set F = {eps} u Z.
enum class BRestrict { None, B, F };

inline bool brestrict_admits(BRestrict r, const BUnit& u) {
    switch (r) {
        case BRestrict::None: return true;
        case BRestrict::B: return u.kind == UnitKind::X || u.kind == UnitKind::Y;
        case BRestrict::F: return u.kind == UnitKind::Z || u.kind == UnitKind::Eps;
    }
    return false;
}

/// Sum of c * chi_{U_g U}.
template <WordProblemGroup H = HWord>
struct BSteinElt {
    std::map<std::pair<BGroup<H>, BUnitSet>, Rational> terms;
    BRestrict restrict = BRestrict::None;

    static BSteinElt chi(const BGroup<H>& g, const BUnitSet& u, const Rational& c = 1) {
        BSteinElt f;
        f.add_term(g, u, c);
        return f;
    }

    void add_term(const BGroup<H>& g, const BUnitSet& u, const Rational& c) {
        if (c == 0 || u.is_empty()) return;
        auto [it, fresh] = terms.emplace(std::make_pair(g, u), c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }

    friend BSteinElt operator+(BSteinElt a, const BSteinElt& b) {
        if (a.terms.empty()) return b;
        if (!b.terms.empty() && a.restrict != b.restrict)
            throw std::invalid_argument("cannot add elements with different restrictions");
        for (const auto& [k, c] : b.terms) a.add_term(k.first, k.second, c);
        return a;
    }
    friend BSteinElt operator*(const Rational& q, BSteinElt a) {
        if (q == 0) return BSteinElt{};
        for (auto& [k, c] : a.terms) c *= q;
        return a;
    }
    friend BSteinElt operator-(const BSteinElt& a, const BSteinElt& b) { return a + Rational(-1) * b; }
};

inline BRestrict brestrict_meet(BRestrict a, BRestrict b, bool& empty) {
    empty = false;
    if (a == BRestrict::None) return b;
    if (b == BRestrict::None || a == b) return a;
    empty = true;
    return BRestrict::None;
}

template <WordProblemGroup H>
BSteinElt<H> bstein_conv(const BSteinElt<H>& f, const BSteinElt<H>& g) {
    bool empty = false;
    BSteinElt<H> out;
    BRestrict r = brestrict_meet(f.restrict, g.restrict, empty);
    if (empty) return out;
    for (const auto& [k1, c] : f.terms)
        for (const auto& [k2, d] : g.terms) out.add_term(k1.first * k2.first, k1.second & k2.second, c * d);
    out.restrict = out.terms.empty() ? BRestrict::None : r;
    return out;
}

template <WordProblemGroup H>
Rational bstein_eval(const BSteinElt<H>& f, const BArrow<H>& a) {
    if (!brestrict_admits(f.restrict, a.u)) return 0;
    Rational sum = 0;
    for (const auto& [k, c] : f.terms)
        if (k.second.contains(a.u) && bisection_hits(k.first, a)) sum += c;
    return sum;
}

template <WordProblemGroup H>
BSteinElt<H> bundle_restrict_F(const BSteinElt<H>& f) {
    bool empty = false;
    BRestrict r = brestrict_meet(f.restrict, BRestrict::F, empty);
    if (empty || f.terms.empty()) return {};
    BSteinElt<H> out = f;
    out.restrict = r;
    return out;
}

/// Adjoint: chi_{U_g U} -> chi_{U_{g^-1} U}.
template <WordProblemGroup H>
BSteinElt<H> bstein_star(const BSteinElt<H>& f) {
    BSteinElt<H> out;
    out.restrict = f.restrict;
    for (const auto& [k, c] : f.terms) out.add_term(k.first.inverse(), k.second, c);
    if (out.terms.empty()) out.restrict = BRestrict::None;
    return out;
}

// ---- named elements --------------------------------------------------------------

template <WordProblemGroup H>
BSteinElt<H> bundle_average(const std::vector<H>& hs) {
    if (hs.empty()) throw std::invalid_argument("empty scattering set");
    BSteinElt<H> f;
    Rational c(1, static_cast<long long>(hs.size()));
    for (const auto& h : hs) f.add_term({0, h}, BUnitSet::whole(), c);
    return f;
}

inline BSteinElt<HWord> bundle_bn(int n) { return bundle_average(sphere<CD>(n)); }

/// chi_{U_(0,1)} - chi_{U_(1,1)}.
template <WordProblemGroup H = HWord>
BSteinElt<H> bundle_a() {
    BSteinElt<H> f;
    f.add_term({0, H{}}, BUnitSet::whole(), 1);
    f.add_term({1, H{}}, BUnitSet::whole(), -1);
    return f;
}

template <WordProblemGroup H = HWord>
BSteinElt<H> bundle_chiB() {
    auto f = BSteinElt<H>::chi({0, H{}}, BUnitSet::whole());
    f.restrict = BRestrict::B;
    return f;
}

// ---- atoms ---------------------------------------------------------------------------

/// One arrow per cell of the partition cut out by the given elements' regions and
/// group labels.  Every value any of them takes is attained at one of these arrows.
template <WordProblemGroup H>
std::vector<BArrow<H>> bundle_atoms(const std::vector<const BSteinElt<H>*>& elems) {
    std::set<std::int64_t> yi, zi;
    std::set<BUnitSet::XIndex> xi;
    std::set<BGroup<H>> gs;
    std::size_t hlen = 0;
    for (const auto* f : elems)
        for (const auto& [k, c] : f->terms) {
            gs.insert(k.first);
            hlen = std::max(hlen, k.first.h.length());
            const auto& u = k.second;
            yi.insert(u.y_toggles().begin(), u.y_toggles().end());
            zi.insert(u.z_toggles().begin(), u.z_toggles().end());
            for (const auto& x : u.x_toggles()) {
                xi.insert(x);
                yi.insert(x.first);
            }
        }
    std::int64_t ymax = yi.empty() ? 0 : *yi.rbegin();
    std::int64_t zmax = zi.empty() ? 0 : *zi.rbegin();
    std::int64_t fresh_y = ymax + 1, fresh_z = zmax + 1;
    std::vector<std::int64_t> columns(yi.begin(), yi.end());
    columns.push_back(fresh_y);

    // A fiber label outside every term: a longer H word.
    H fresh_h{};
    if constexpr (requires { H::generator(0, 1); }) fresh_h = H::generator(0, static_cast<int>(hlen) + 1);
    std::vector<BGroup<H>> fiber(gs.begin(), gs.end());
    for (int n = 0; n < 2; ++n) {
        BGroup<H> g{n, fresh_h};
        if (!gs.count(g)) fiber.push_back(g);
        BGroup<H> e{n, H{}};
        if (!gs.count(e) && std::find(fiber.begin(), fiber.end(), e) == fiber.end()) fiber.push_back(e);
    }

    std::vector<BArrow<H>> out;
    auto over_group = [&](BUnit u) {
        for (const auto& g : fiber) out.push_back(BArrow<H>::make(g.n, g.h, u));
    };
    over_group(BUnit::eps());
    for (auto i : zi) over_group(BUnit::z(i));
    over_group(BUnit::z(fresh_z));
    for (auto i : columns) {
        out.push_back(BArrow<H>::make(0, H{}, BUnit::y(i)));
        out.push_back(BArrow<H>::make(1, H{}, BUnit::y(i)));
        std::int64_t jmax = 0;
        for (const auto& [a, b] : xi)
            if (a == i) {
                out.push_back(BArrow<H>::make(0, H{}, BUnit::x(a, b)));
                jmax = std::max(jmax, b);
            }
        out.push_back(BArrow<H>::make(0, H{}, BUnit::x(i, jmax + 1)));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

template <WordProblemGroup H>
Rational bundle_sup_dist(const BSteinElt<H>& f, const BSteinElt<H>& g) {
    Rational m = 0;
    for (const auto& a : bundle_atoms<H>({&f, &g})) m = std::max(m, abs(bstein_eval(f, a) - bstein_eval(g, a)));
    return m;
}

template <WordProblemGroup H>
bool bstein_is_zero(const BSteinElt<H>& f) {
    for (const auto& a : bundle_atoms<H>({&f}))
        if (bstein_eval(f, a) != 0) return false;
    return true;
}

template <WordProblemGroup H = HWord>
struct BundleVerdict {
    bool singular = true;
    std::vector<std::pair<BArrow<H>, Rational>> certificate;  // nonzero values over Y and eps
    std::optional<BArrow<H>> witness;                         // isolated arrow in the support
};

/// Arrows over X and Z are isolated; every open set meeting Y or eps also meets X or Z.
template <WordProblemGroup H>
BundleVerdict<H> bundle_is_singular(const BSteinElt<H>& f) {
    BundleVerdict<H> v;
    for (const auto& a : bundle_atoms<H>({&f})) {
        Rational val = bstein_eval(f, a);
        if (val == 0) continue;
        if (a.u.kind == UnitKind::X || a.u.kind == UnitKind::Z) {
            if (!v.witness) v.witness = a;
            v.singular = false;
        } else {
            v.certificate.emplace_back(a, val);
        }
    }
    if (!v.singular) v.certificate.clear();
    return v;
}

}  // namespace scatter
