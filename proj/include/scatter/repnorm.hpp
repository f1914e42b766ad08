#pragma once

// Regular representations on truncated germ bases, sparse norm estimation,
// spectral radii of random walks and the scattering profile.

#include "bundle.hpp"
#include "steinberg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scatter {

enum class GermClass { B, C, Eps };

inline const char* germ_class_name(GermClass c) {
    switch (c) {
        case GermClass::B: return "B";
        case GermClass::C: return "C";
        case GermClass::Eps: return "eps";
    }
    return "?";
}

template <WordProblemGroup H>
GermClass classify_range(const Word<H>& r) {
    if (r.length_at_most(1) == 0) return GermClass::Eps;
    return r.at(0).is_y() ? GermClass::B : GermClass::C;
}

/// Germs with common source `base`, pairwise distinct.
template <WordProblemGroup H = HWord>
struct GermBasis {
    Word<H> base;
    std::vector<SElt<H>> germs;
    std::vector<GermClass> classes;
    std::map<SElt<H>, std::size_t> index;  // germ key -> position
    bool truncated = false;                 // the size budget cut the enumeration short

    std::size_t size() const { return germs.size(); }

    std::optional<std::size_t> find(const SElt<H>& s) const {
        if (!s_defined_at(s, base)) return std::nullopt;
        auto it = index.find(germ_key(s, base));
        if (it == index.end()) return std::nullopt;
        return it->second;
    }

    bool insert(const SElt<H>& s) {
        auto key = germ_key(s, base);
        if (index.count(key)) return false;
        index.emplace(std::move(key), germs.size());
        germs.push_back(s);
        classes.push_back(classify_range(germ_range(s, base)));
        return true;
    }
};

/// Germs reachable from [1,w] by at most `steps` left multiplications by terms of f
/// or their inverses.
template <WordProblemGroup H>
GermBasis<H> enumerate_orbit(const SteinElt<H>& f, const Word<H>& w, int steps,
                             std::size_t budget = std::numeric_limits<std::size_t>::max()) {
    GermBasis<H> basis;
    basis.base = w;
    basis.insert(SElt<H>::one());
    std::set<SElt<H>> movers;
    for (const auto& [s, c] : f.terms) {
        movers.insert(s);
        movers.insert(s_inv(s));
    }
    std::vector<SElt<H>> frontier{SElt<H>::one()};
    for (int step = 0; step < steps && !frontier.empty(); ++step) {
        std::vector<SElt<H>> next;
        for (const auto& t : frontier) {
            Word<H> r = germ_range(t, w);
            for (const auto& s : movers) {
                if (!s_defined_at(s, r)) continue;
                if (basis.size() >= budget) {
                    basis.truncated = true;
                    return basis;
                }
                SElt<H> st = s_mul(s, t);
                if (basis.insert(st)) next.push_back(st);
            }
        }
        frontier = std::move(next);
    }
    return basis;
}

// ---- sparse operators ---------------------------------------------------------------

/// Column-compressed matrix with integer numerators and a common rational scale.
/// Columns whose image leaves the row basis are flagged as boundary.
struct SparseOperator {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> col_start{0};
    std::vector<std::size_t> row_index;
    std::vector<std::int64_t> numer;
    Rational scale = 1;
    std::vector<char> boundary;
    bool adjoint = false;  // represents the transpose of the stored matrix

    std::size_t nnz() const { return numer.size(); }

    Rational entry(std::size_t r, std::size_t c) const {
        if (adjoint) std::swap(r, c);
        for (std::size_t k = col_start[c]; k < col_start[c + 1]; ++k)
            if (row_index[k] == r) return scale * numer[k];
        return 0;
    }

    std::size_t out_dim() const { return adjoint ? cols : rows; }
    std::size_t in_dim() const { return adjoint ? rows : cols; }

    std::vector<double> apply(const std::vector<double>& x) const { return multiply(x, adjoint); }
    std::vector<double> apply_adjoint(const std::vector<double>& y) const { return multiply(y, !adjoint); }

    SparseOperator transpose() const {
        SparseOperator t = *this;
        t.adjoint = !adjoint;
        return t;
    }

    /// Entries of row r as (col, value); materializes the transposed layout.
    std::vector<std::pair<std::size_t, Rational>> row(std::size_t r) const {
        std::vector<std::pair<std::size_t, Rational>> out;
        if (!adjoint) {
            for (std::size_t c = 0; c < cols; ++c)
                for (std::size_t k = col_start[c]; k < col_start[c + 1]; ++k)
                    if (row_index[k] == r) out.emplace_back(c, scale * numer[k]);
        } else {
            for (std::size_t k = col_start[r]; k < col_start[r + 1]; ++k) out.emplace_back(row_index[k], scale * numer[k]);
        }
        return out;
    }

private:
    std::vector<double> multiply(const std::vector<double>& x, bool transposed) const {
        const double s = to_double(scale);
        std::vector<double> y(transposed ? cols : rows, 0.0);
        for (std::size_t c = 0; c < cols; ++c)
            for (std::size_t k = col_start[c]; k < col_start[c + 1]; ++k) {
                if (transposed) y[c] += s * static_cast<double>(numer[k]) * x[row_index[k]];
                else y[row_index[k]] += s * static_cast<double>(numer[k]) * x[c];
            }
        return y;
    }
};

/// Builds a SparseOperator from rational columns.
inline SparseOperator make_operator(std::size_t rows, const std::vector<std::vector<std::pair<std::size_t, Rational>>>& columns,
                                    const std::vector<char>& boundary) {
    SparseOperator op;
    op.rows = rows;
    op.cols = columns.size();
    op.boundary = boundary;
    BigInt lcm = 1;
    for (const auto& col : columns)
        for (const auto& [r, v] : col) {
            BigInt d = boost::multiprecision::denominator(v);
            lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
        }
    op.scale = Rational(BigInt(1), lcm);
    for (const auto& col : columns) {
        for (const auto& [r, v] : col) {
            if (v == 0) continue;
            Rational n = v * Rational(lcm);
            BigInt num = boost::multiprecision::numerator(n);
            if (num > std::numeric_limits<std::int64_t>::max() || num < std::numeric_limits<std::int64_t>::min())
                throw std::overflow_error("operator entry too large");
            op.row_index.push_back(r);
            op.numer.push_back(num.convert_to<std::int64_t>());
        }
        op.col_start.push_back(op.numer.size());
    }
    return op;
}

/// Matrix of lambda_w(f) on the span of the basis.
template <WordProblemGroup H>
SparseOperator lambda_matrix(const SteinElt<H>& f, const GermBasis<H>& basis) {
    std::vector<std::vector<std::pair<std::size_t, Rational>>> columns(basis.size());
    std::vector<char> boundary(basis.size(), 0);
    for (std::size_t c = 0; c < basis.size(); ++c) {
        const SElt<H>& t = basis.germs[c];
        Word<H> r = germ_range(t, basis.base);
        if (!region_contains(f.region, r)) continue;
        // Right multiplication by t is injective on germs at r, so terms can be keyed by
        // the germ of s t at the base directly.  Images outside the basis are summed per
        // germ and only flag the column when they do not cancel.
        std::map<std::size_t, Rational> col;
        std::map<SElt<H>, Rational> outside;
        for (const auto& [s, coef] : f.terms) {
            if (!s_defined_at(s, r)) continue;
            SElt<H> st = s_mul(s, t);
            auto key = germ_key(st, basis.base);
            auto it = basis.index.find(key);
            if (it != basis.index.end()) col[it->second] += coef;
            else outside[std::move(key)] += coef;
        }
        for (const auto& [key, v] : outside)
            if (v != 0) boundary[c] = 1;
        for (const auto& [r2, v] : col)
            if (v != 0) columns[c].emplace_back(r2, v);
    }
    return make_operator(basis.size(), columns, boundary);
}

// ---- norm estimation ----------------------------------------------------------------

struct NormEstimate {
    double lower = 0.0;
    std::optional<double> upper;
    int iterations = 0;
    int radius = 0;
};

inline double l2(const std::vector<double>& v) {
    long double s = 0;
    for (double x : v) s += static_cast<long double>(x) * x;
    return static_cast<double>(std::sqrt(s));
}

/// Power iteration on A^T A from the all-ones vector over interior columns.
/// lower = max over iterates of |A v| / |v|, a certified lower bound on |A|.
inline NormEstimate opnorm_lower(const SparseOperator& op, double tol, int max_iter) {
    if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
    NormEstimate est;
    const std::size_t n = op.in_dim();
    auto interior = [&](std::size_t i) { return op.adjoint || op.boundary.empty() || !op.boundary[i]; };
    bool nonzero = false;
    for (auto x : op.numer) nonzero = nonzero || x != 0;
    if (!nonzero || n == 0) return est;

    std::vector<double> v(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i] = interior(i) ? 1.0 : 0.0;
    double nv = l2(v);
    if (nv == 0) return est;
    for (auto& x : v) x /= nv;

    double prev = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        auto u = op.apply(v);
        double val = l2(u);
        est.iterations = it;
        est.lower = std::max(est.lower, val);
        if (val == 0) break;
        auto w = op.apply_adjoint(u);
        for (std::size_t i = 0; i < n; ++i)
            if (!interior(i)) w[i] = 0.0;
        double nw = l2(w);
        if (nw == 0) break;
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
        if (it > 1 && std::abs(val - prev) <= tol * val) break;
        prev = val;
    }
    return est;
}

// ---- Haagerup bounds -------------------------------------------------------------------

/// (n+1) / sqrt|S_n|; for rank 2 this is (n+1) / (2 * 3^((n-1)/2)).
struct HaagerupBound {
    int n = 1;
    Rational square;  // exact square of the bound
    double value = 0;
    std::string expr;
};

inline HaagerupBound haagerup_bound(int n, int rank = 2) {
    if (n < 1) throw std::invalid_argument("haagerup bound needs n >= 1");
    HaagerupBound b;
    b.n = n;
    b.square = Rational(BigInt((n + 1) * (n + 1)), BigInt(sphere_size(rank, n)));
    b.value = std::sqrt(to_double(b.square));
    if (rank == 2) b.expr = std::to_string(n + 1) + "/(2*3^(" + std::to_string(n - 1) + "/2))";
    else b.expr = std::to_string(n + 1) + "/sqrt(" + std::to_string(sphere_size(rank, n)) + ")";
    return b;
}

/// Cayley-ball truncation of sum_h c_h lambda(h): domain ball(radius), codomain the ball
/// containing every image, so no column is cut.
template <class A>
SparseOperator walk_operator(const std::map<FreeWord<A>, Rational>& coeffs, int radius) {
    constexpr int r = FreeWord<A>::rank;
    std::size_t maxlen = 0;
    BigInt lcm = 1;
    for (const auto& [h, c] : coeffs) {
        maxlen = std::max(maxlen, h.length());
        BigInt d = boost::multiprecision::denominator(c);
        lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
    }
    SparseOperator op;
    op.cols = ball_size(r, radius);
    op.rows = ball_size(r, radius + static_cast<int>(maxlen));
    op.scale = Rational(BigInt(1), lcm);
    op.boundary.assign(op.cols, 0);
    std::vector<std::pair<std::uint64_t, std::int64_t>> terms;
    std::vector<std::int64_t> nums;
    for (const auto& [h, c] : coeffs) {
        BigInt num = boost::multiprecision::numerator(c * Rational(lcm));
        nums.push_back(num.template convert_to<std::int64_t>());
    }
    op.row_index.reserve(op.cols * coeffs.size());
    op.numer.reserve(op.cols * coeffs.size());
    op.col_start.reserve(op.cols + 1);
    for (std::uint64_t col = 0; col < op.cols; ++col) {
        FreeWord<A> w = word_unrank<A>(col);
        std::size_t k = 0;
        for (const auto& [h, c] : coeffs) {
            op.row_index.push_back(product_rank(h, w));
            op.numer.push_back(nums[k++]);
        }
        op.col_start.push_back(op.numer.size());
    }
    return op;
}

template <class A>
std::optional<int> sphere_radius_of(const std::vector<FreeWord<A>>& K) {
    if (K.empty()) return std::nullopt;
    std::size_t n = K.front().length();
    if (n == 0) return std::nullopt;
    std::set<FreeWord<A>> ks(K.begin(), K.end());
    if (ks.size() != sphere_size(FreeWord<A>::rank, static_cast<int>(n))) return std::nullopt;
    for (const auto& k : ks)
        if (k.length() != n) return std::nullopt;
    return static_cast<int>(n);
}

inline constexpr std::uint64_t rho_entry_budget = 20'000'000;
inline constexpr std::uint64_t rho_row_budget = 50'000'000;

/// rho(K) = |(1/|K|) sum_{h in K} lambda(h)|.
/// Truncated estimate of the norm of the uniform average over K.  The radius actually
/// used (possibly reduced to respect the memory budgets) is reported in the result.
template <class A>
NormEstimate rho_estimate(const std::vector<FreeWord<A>>& K, int radius, double tol, int max_iter = 5000) {
    if (K.empty()) throw std::invalid_argument("K must be non-empty");
    if (radius < 0) throw std::invalid_argument("radius must be non-negative");
    std::set<FreeWord<A>> ks(K.begin(), K.end());
    for (const auto& k : ks)
        if (!ks.count(k.inverse())) throw std::invalid_argument("K must be symmetric");
    std::map<FreeWord<A>, Rational> coeffs;
    for (const auto& k : ks) coeffs[k] = Rational(BigInt(1), BigInt(ks.size()));
    // Shrink the support radius until the operator fits in memory.
    constexpr int r = FreeWord<A>::rank;
    const int maxlen = static_cast<int>(ks.rbegin()->length());
    while (radius > 0 && (ball_size(r, radius) * ks.size() > rho_entry_budget || ball_size(r, radius + maxlen) > rho_row_budget)) --radius;
    auto op = walk_operator<A>(coeffs, radius);
    NormEstimate est = opnorm_lower(op, tol, max_iter);
    est.radius = radius;
    if (auto n = sphere_radius_of<A>({ks.begin(), ks.end()})) est.upper = std::min(1.0, haagerup_bound(*n, FreeWord<A>::rank).value);
    else est.upper = 1.0;
    return est;
}

// ---- norm bounds for elements supported on H --------------------------------------------

/// Coefficients of f as a function on H; throws unless every term is (h, D(eps)) with h in H.
template <WordProblemGroup H>
std::map<H, Rational> h_coefficients(const SteinElt<H>& f) {
    if (f.region != Region::Full) throw std::invalid_argument("element is region-restricted");
    std::map<H, Rational> out;
    for (const auto& [s, c] : f.terms) {
        if (!s.is_group() || !s.g.f.is_identity() || s.g.n != 0 || s.g.m != 0)
            throw std::invalid_argument("term " + s.str() + " is not in H");
        out[s.g.h] += c;
    }
    return out;
}

/// Upper bound on the reduced norm of sum_h c_h lambda(h): Haagerup applied sphere by sphere
/// when H is free, otherwise the l1 norm.
template <WordProblemGroup H>
double walk_norm_upper(const std::map<H, Rational>& coeffs) {
    double l1 = 0;
    for (const auto& [h, c] : coeffs) l1 += std::abs(to_double(c));
    if constexpr (requires { H::rank; }) {
        std::map<std::size_t, long double> sq;
        for (const auto& [h, c] : coeffs) {
            long double x = to_double(c);
            sq[h.length()] += x * x;
        }
        long double hsum = 0;
        for (const auto& [r, s] : sq) hsum += (static_cast<long double>(r) + 1) * std::sqrt(s);
        return std::min(l1, static_cast<double>(hsum));
    }
    return l1;
}

struct HNormOptions {
    int steps = 2;
    std::size_t budget = 4000;
    std::size_t work_budget = 10'000'000;  // cap on basis size * term count per sampled base word
    double tol = 1e-9;
    int max_iter = 500;
    int fiber_radius = 4;  // bundle: ball radius for the fiber-group truncation
};

/// Sample base words for the three germ classes: a y-word, the empty word, a z-word.
template <WordProblemGroup H>
std::vector<Word<H>> sample_base_words() {
    auto y = Letter<H>::Y(1, 0);
    auto z = Letter<H>::Z(1, KElt<H>{});
    return {Word<H>::omega({}, {y}), Word<H>(FinWord<H>{}), Word<H>::omega({}, {z})};
}

/// Reduced-norm bounds for f supported on H: upper from the trivial representation and
/// the left regular representation of H, lower from truncated lambda_w at sampled w.
template <WordProblemGroup H>
NormEstimate stein_H_norm_bound(const SteinElt<H>& f, const HNormOptions& opt = {}) {
    auto coeffs = h_coefficients(f);
    Rational total = 0;
    for (const auto& [h, c] : coeffs) total += c;
    NormEstimate est;
    est.upper = std::max(std::abs(to_double(total)), walk_norm_upper(coeffs));
    est.radius = opt.steps;
    const std::size_t per_term = opt.work_budget / std::max<std::size_t>(1, f.terms.size());
    const std::size_t budget = std::min(opt.budget, std::max<std::size_t>(64, per_term));
    for (const auto& w : sample_base_words<H>()) {
        auto basis = enumerate_orbit(f, w, opt.steps, budget);
        auto op = lambda_matrix(f, basis);
        auto e = opnorm_lower(op, opt.tol, opt.max_iter);
        est.lower = std::max(est.lower, e.lower);
        est.iterations += e.iterations;
    }
    if (est.lower > *est.upper * (1 + 1e-12) + 1e-12) throw std::logic_error("norm lower bound exceeds upper bound");
    return est;
}

/// lambda_z of a bundle element on Z_2 x ball(radius), via the fiber group at a Z unit.
template <WordProblemGroup H>
SparseOperator bundle_fiber_operator(const BSteinElt<H>& f, const BUnit& z, int radius) {
    static_assert(requires { H::rank; }, "fiber truncation needs a free group H");
    if (z.kind != UnitKind::Z && z.kind != UnitKind::Eps) throw std::invalid_argument("fiber operator needs a Z or eps unit");
    constexpr int r = H::rank;
    std::map<BGroup<H>, Rational> coeffs;
    std::size_t maxlen = 0;
    if (brestrict_admits(f.restrict, z))
        for (const auto& [k, c] : f.terms)
            if (k.second.contains(z)) {
                coeffs[k.first] += c;
                maxlen = std::max(maxlen, k.first.h.length());
            }
    const std::uint64_t in_ball = ball_size(r, radius);
    const std::uint64_t out_ball = ball_size(r, radius + static_cast<int>(maxlen));
    std::vector<std::vector<std::pair<std::size_t, Rational>>> columns(2 * in_ball);
    for (int n = 0; n < 2; ++n)
        for (std::uint64_t i = 0; i < in_ball; ++i) {
            H h = word_unrank<typename H::alphabet_type>(i);
            auto& col = columns[static_cast<std::size_t>(n) * in_ball + i];
            for (const auto& [g, c] : coeffs) {
                if (c == 0) continue;
                int m = (g.n + n) % 2;
                col.emplace_back(static_cast<std::size_t>(m) * out_ball + product_rank(g.h, h), c);
            }
        }
    return make_operator(2 * out_ball, columns, std::vector<char>(columns.size(), 0));
}

// ---- the scattering profile ------------------------------------------------------------

enum class Example { Bundle, Selfsim };

struct ProfileRow {
    int n = 0;
    std::optional<int> m;  // nullopt: the limit chi_B
    Rational sup_dist;
    double upper = 0;
    double lower = 0;
};

/// Reduced-norm bound pair for b_n - b_m (or b_n - chi_B when m is absent).
/// The lower column is max(sup distance, truncated lambda_w estimate): the reduced norm
/// dominates the sup norm.
inline ProfileRow profile_row(Example ex, int n, std::optional<int> m, const HNormOptions& opt) {
    ProfileRow row;
    row.n = n;
    row.m = m;
    if (!m) {
        row.sup_dist = ex == Example::Bundle ? bundle_sup_dist(bundle_bn(n), bundle_chiB<>())
                                             : st_sup_dist(selfsim_bn(n), selfsim_chiB<>());
        row.upper = haagerup_bound(n).value;
        row.lower = to_double(row.sup_dist);
        return row;
    }
    if (n == *m) return row;
    row.sup_dist = ex == Example::Bundle ? bundle_sup_dist(bundle_bn(n), bundle_bn(*m))
                                         : st_sup_dist(selfsim_bn(n), selfsim_bn(*m));
    if (ex == Example::Selfsim) {
        auto est = stein_H_norm_bound(selfsim_bn(n) - selfsim_bn(*m), opt);
        row.upper = *est.upper;
        row.lower = std::max(est.lower, to_double(row.sup_dist));
        return row;
    }
    // Over X and Y both averages act as the identity; over Z and eps as lambda_G.
    auto diff = bundle_bn(n) - bundle_bn(*m);
    std::map<HWord, Rational> coeffs;
    for (const auto& [k, c] : diff.terms) coeffs[k.first.h] += c;
    row.upper = walk_norm_upper(coeffs);
    auto fiber = opnorm_lower(bundle_fiber_operator(diff, BUnit::z(1), opt.fiber_radius), opt.tol, opt.max_iter);
    row.lower = std::max(fiber.lower, to_double(row.sup_dist));
    return row;
}

inline std::vector<ProfileRow> cauchy_profile(Example ex, std::vector<int> indices, const HNormOptions& opt = {}) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    for (int n : indices)
        if (n < 1) throw std::invalid_argument("scattering indices must be >= 1");
    std::vector<ProfileRow> rows;
    for (std::size_t a = 0; a < indices.size(); ++a) {
        for (std::size_t b = a; b < indices.size(); ++b) rows.push_back(profile_row(ex, indices[a], indices[b], opt));
        rows.push_back(profile_row(ex, indices[a], std::nullopt, opt));
    }
    return rows;
}

}  // namespace scatter
