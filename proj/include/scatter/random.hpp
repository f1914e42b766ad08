#pragma once

// Seeded samplers for randomized suites.

#include "bundle.hpp"
#include "steinberg.hpp"

#include <cstdint>
#include <random>
#include <set>
#include <vector>

namespace scatter {

using Rng = std::mt19937_64;

inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

template <class A>
FreeWord<A> random_free_word(Rng& rng, int max_len) {
    constexpr int r = FreeWord<A>::rank;
    std::vector<typename FreeWord<A>::letter_type> raw;
    auto len = uniform_int(rng, 0, max_len);
    for (std::int64_t i = 0; i < len; ++i) {
        auto g = uniform_int(rng, 1, r);
        raw.push_back(static_cast<typename FreeWord<A>::letter_type>(uniform_int(rng, 0, 1) ? g : -g));
    }
    return FreeWord<A>::from_letters(raw);
}

template <WordProblemGroup H = HWord>
KElt<H> random_kelt(Rng& rng, int max_len = 3, std::int64_t spread = 5) {
    return {random_free_word<typename H::alphabet_type>(rng, max_len), random_free_word<AB>(rng, max_len),
            uniform_int(rng, -spread, spread)};
}

template <WordProblemGroup H = HWord>
GElt<H> random_gelt(Rng& rng, int max_len = 3, std::int64_t spread = 5) {
    return {random_free_word<typename H::alphabet_type>(rng, max_len), random_free_word<AB>(rng, max_len),
            uniform_int(rng, -spread, spread), uniform_int(rng, -spread, spread)};
}

template <WordProblemGroup H = HWord>
GElt<H> random_nontrivial_gelt(Rng& rng, int max_len = 3, std::int64_t spread = 5) {
    while (true) {
        auto g = random_gelt<H>(rng, max_len, spread);
        if (!g.is_identity()) return g;
    }
}

/// Letters drawn from a small index pool so that collisions actually happen.
template <WordProblemGroup H = HWord>
Letter<H> random_letter(Rng& rng, std::int64_t spread = 3, int kmax_len = 1) {
    int ch = static_cast<int>(uniform_int(rng, 1, 2));
    if (uniform_int(rng, 0, 1)) return Letter<H>::Y(ch, uniform_int(rng, -spread, spread));
    return Letter<H>::Z(ch, random_kelt<H>(rng, kmax_len, spread));
}

template <WordProblemGroup H = HWord>
FinWord<H> random_fin_word(Rng& rng, int min_len, int max_len, std::int64_t spread = 3) {
    FinWord<H> w;
    auto len = uniform_int(rng, min_len, max_len);
    for (std::int64_t i = 0; i < len; ++i) w.push_back(random_letter<H>(rng, spread));
    return w;
}

/// Finite or eventually periodic word with at least min_len letters.
template <WordProblemGroup H = HWord>
Word<H> random_word(Rng& rng, int min_len = 1, int max_len = 4) {
    auto head = random_fin_word<H>(rng, min_len, max_len);
    if (uniform_int(rng, 0, 1)) return Word<H>(head);
    return Word<H>::omega(head, random_fin_word<H>(rng, 1, 2));
}

template <WordProblemGroup H = HWord>
SElt<H> random_selt(Rng& rng, int max_path = 2) {
    return SElt<H>::triple(random_fin_word<H>(rng, 0, max_path), random_gelt<H>(rng, 2, 2),
                           random_fin_word<H>(rng, 0, max_path));
}

template <WordProblemGroup H = HWord>
SteinElt<H> random_stein(Rng& rng, int max_terms = 3, int max_path = 2) {
    SteinElt<H> f;
    auto n = uniform_int(rng, 1, max_terms);
    for (std::int64_t i = 0; i < n; ++i) f.add_term(random_selt<H>(rng, max_path), Rational(uniform_int(rng, -3, 3), uniform_int(rng, 1, 3)));
    return f;
}

// ---- bundle ------------------------------------------------------------------------

inline BUnit random_bunit(Rng& rng, std::int64_t spread = 4) {
    switch (uniform_int(rng, 0, 3)) {
        case 0: return BUnit::x(uniform_int(rng, 1, spread), uniform_int(rng, 1, spread));
        case 1: return BUnit::y(uniform_int(rng, 1, spread));
        case 2: return BUnit::z(uniform_int(rng, 1, spread));
        default: return BUnit::eps();
    }
}

/// Random compact open set: unions of points, y-cylinders and cofinite pieces.
inline BUnitSet random_bset(Rng& rng, std::int64_t spread = 4) {
    BUnitSet u;
    auto parts = uniform_int(rng, 1, 3);
    for (std::int64_t p = 0; p < parts; ++p) {
        switch (uniform_int(rng, 0, 3)) {
            case 0: {
                auto b = random_bunit(rng, spread);
                if (b.kind == UnitKind::X || b.kind == UnitKind::Z) u = u | BUnitSet::point(b);
                break;
            }
            case 1: {
                std::set<std::int64_t> cols;
                for (std::int64_t j = uniform_int(rng, 0, 2); j > 0; --j) cols.insert(uniform_int(rng, 1, spread));
                u = u | BUnitSet::y_cylinder(uniform_int(rng, 1, spread), cols);
                break;
            }
            case 2: {
                std::set<std::int64_t> fy, fz;
                for (std::int64_t j = uniform_int(rng, 0, 2); j > 0; --j) fy.insert(uniform_int(rng, 1, spread));
                for (std::int64_t j = uniform_int(rng, 0, 2); j > 0; --j) fz.insert(uniform_int(rng, 1, spread));
                u = u | BUnitSet::cofinite(fy, fz);
                break;
            }
            default: u = u - BUnitSet::point(BUnit::z(uniform_int(rng, 1, spread)));
        }
    }
    return u;
}

template <WordProblemGroup H = HWord>
BGroup<H> random_bgroup(Rng& rng, int max_len = 2) {
    return {static_cast<int>(uniform_int(rng, 0, 1)), random_free_word<typename H::alphabet_type>(rng, max_len)};
}

template <WordProblemGroup H = HWord>
BSteinElt<H> random_bstein(Rng& rng, int max_terms = 3) {
    BSteinElt<H> f;
    auto n = uniform_int(rng, 1, max_terms);
    for (std::int64_t i = 0; i < n; ++i)
        f.add_term(random_bgroup<H>(rng), random_bset(rng), Rational(uniform_int(rng, -3, 3), uniform_int(rng, 1, 3)));
    return f;
}

template <WordProblemGroup H = HWord>
BArrow<H> random_barrow(Rng& rng, std::int64_t spread = 5) {
    auto g = random_bgroup<H>(rng);
    return BArrow<H>::make(g.n, g.h, random_bunit(rng, spread));
}

}  // namespace scatter
