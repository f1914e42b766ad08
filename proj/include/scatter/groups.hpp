#pragma once

#include "free_group.hpp"

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace scatter {

inline std::int64_t checked_add(std::int64_t x, std::int64_t y) {
    std::int64_t r;
    if (__builtin_add_overflow(x, y, &r)) throw std::overflow_error("integer index overflow");
    return r;
}

inline std::int64_t checked_neg(std::int64_t x) {
    std::int64_t r;
    if (__builtin_sub_overflow(std::int64_t{0}, x, &r)) throw std::overflow_error("integer index overflow");
    return r;
}

/// K = H x F x Z.
template <WordProblemGroup H = HWord>
struct KElt {
    H h{};
    FWord f{};
    std::int64_t n = 0;

    bool is_identity() const { return h.is_identity() && f.is_identity() && n == 0; }
    KElt inverse() const { return {h.inverse(), f.inverse(), checked_neg(n)}; }
    friend KElt operator*(const KElt& x, const KElt& y) { return {x.h * y.h, x.f * y.f, checked_add(x.n, y.n)}; }
    friend bool operator==(const KElt&, const KElt&) = default;
    friend std::strong_ordering operator<=>(const KElt& x, const KElt& y) {
        if (auto c = x.h <=> y.h; c != 0) return c;
        if (auto c = x.f <=> y.f; c != 0) return c;
        return x.n <=> y.n;
    }
    std::string str() const { return "(" + h.str() + "," + f.str() + "," + std::to_string(n) + ")"; }
};

/// G = H x F x Z x Z.
template <WordProblemGroup H = HWord>
struct GElt {
    H h{};
    FWord f{};
    std::int64_t n = 0;
    std::int64_t m = 0;

    static GElt from_h(const H& x) { return {x, {}, 0, 0}; }
    static GElt from_f(const FWord& x) { return {{}, x, 0, 0}; }
    static GElt from_z2(std::int64_t n, std::int64_t m) { return {{}, {}, n, m}; }

    bool is_identity() const { return h.is_identity() && f.is_identity() && n == 0 && m == 0; }
    GElt inverse() const { return {h.inverse(), f.inverse(), checked_neg(n), checked_neg(m)}; }
    friend GElt operator*(const GElt& x, const GElt& y) {
        return {x.h * y.h, x.f * y.f, checked_add(x.n, y.n), checked_add(x.m, y.m)};
    }
    friend bool operator==(const GElt&, const GElt&) = default;
    friend std::strong_ordering operator<=>(const GElt& x, const GElt& y) {
        if (auto c = x.h <=> y.h; c != 0) return c;
        if (auto c = x.f <=> y.f; c != 0) return c;
        if (auto c = x.n <=> y.n; c != 0) return c;
        return x.m <=> y.m;
    }
    std::string str() const {
        return "(" + h.str() + "," + f.str() + "," + std::to_string(n) + "," + std::to_string(m) + ")";
    }
};

template <WordProblemGroup H>
GElt<H> group_mul(const GElt<H>& x, const GElt<H>& y) { return x * y; }

template <WordProblemGroup H>
GElt<H> group_inv(const GElt<H>& x) { return x.inverse(); }

/// tau: abelianize F into the two Z factors.
template <WordProblemGroup H>
GElt<H> hom_tau(const GElt<H>& g) {
    return GElt<H>::from_z2(g.f.exponent_sum(0), g.f.exponent_sum(1));
}

template <WordProblemGroup H>
KElt<H> hom_pi(int i, const GElt<H>& g) {
    if (i == 1) return {g.h, g.f, g.n};
    if (i == 2) return {g.h, g.f, g.m};
    throw std::invalid_argument("channel must be 1 or 2");
}

template <WordProblemGroup H>
std::int64_t hom_zeta(int i, const GElt<H>& g) {
    if (i == 1) return g.n;
    if (i == 2) return g.m;
    throw std::invalid_argument("channel must be 1 or 2");
}

}  // namespace scatter
