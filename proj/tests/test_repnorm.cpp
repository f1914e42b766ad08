#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace scatter;

namespace {

SteinElt<HWord> h_elt(const std::map<HWord, Rational>& c) {
    SteinElt<HWord> f;
    for (const auto& [h, v] : c) f.add_term(SElt<HWord>::group({h, {}, 0, 0}), v);
    return f;
}

}  // namespace

TEST(OpNorm, ExplicitMatrix) {
    // [[1,1],[0,1]] has norm equal to the golden ratio.
    auto op = make_operator(2, {{{0, 1}}, {{0, 1}, {1, 1}}}, {0, 0});
    auto e = opnorm_lower(op, 1e-14, 1000);
    EXPECT_NEAR(e.lower, (1 + std::sqrt(5.0)) / 2, 1e-9);
    EXPECT_LE(e.lower, (1 + std::sqrt(5.0)) / 2 + 1e-12);
    EXPECT_EQ(op.entry(0, 1), 1);
    EXPECT_EQ(op.entry(1, 0), 0);
    EXPECT_EQ(op.transpose().entry(1, 0), 1);
    EXPECT_THROW(opnorm_lower(op, 0, 10), std::invalid_argument);
}

TEST(OpNorm, ZeroOperator) {
    auto op = make_operator(3, {{}, {}}, {0, 0});
    EXPECT_EQ(opnorm_lower(op, 1e-9, 10).lower, 0.0);
}

TEST(Haagerup, ClosedFormAndMonotone) {
    double prev = 2;
    for (int n = 1; n <= 12; ++n) {
        auto b = haagerup_bound(n);
        EXPECT_NEAR(b.value, oracle::haagerup_closed_form(n), 1e-12) << n;
        EXPECT_EQ(b.square, Rational(BigInt((n + 1) * (n + 1)), BigInt(4 * static_cast<std::int64_t>(std::pow(3, n - 1)))));
        if (n >= 2) EXPECT_LT(b.value, prev);
        prev = b.value;
    }
    EXPECT_EQ(haagerup_bound(2).expr, "3/(2*3^(1/2))");
    EXPECT_NEAR(haagerup_bound(2, 3).value, 3 / std::sqrt(30.0), 1e-12);
    EXPECT_THROW(haagerup_bound(0), std::invalid_argument);
}

TEST(WalkOperator, RowsAreProducts) {
    std::map<HWord, Rational> c;
    for (const auto& h : sphere<CD>(2)) c[h] = Rational(1, 12);
    auto op = walk_operator<CD>(c, 3);
    ASSERT_EQ(op.cols, ball_size(2, 3));
    ASSERT_EQ(op.rows, ball_size(2, 5));
    for (std::size_t col = 0; col < op.cols; ++col) {
        auto w = word_unrank<CD>(col);
        std::set<HWord> got, want;
        for (std::size_t k = op.col_start[col]; k < op.col_start[col + 1]; ++k) got.insert(word_unrank<CD>(op.row_index[k]));
        for (const auto& [h, v] : c) want.insert(h * w);
        EXPECT_EQ(got, want) << w.str();
    }
}

TEST(Rho, SphereOneMatchesRadialOracle) {
    for (int R : {6, 10}) {
        auto e = rho_estimate<CD>(sphere<CD>(1), R, 1e-12, 20000);
        double o = oracle::radial_walk_norm(2, R);
        EXPECT_EQ(e.radius, R);
        EXPECT_LE(e.lower, o + 1e-9) << R;
        EXPECT_NEAR(e.lower, o, 1e-3) << R;
        EXPECT_LE(e.lower, std::sqrt(3.0) / 2 + 1e-12);
        ASSERT_TRUE(e.upper);
        EXPECT_EQ(*e.upper, 1.0);
    }
}

TEST(Rho, SpheresBelowHaagerup) {
    for (int n : {2, 3, 4}) {
        auto e = rho_estimate<CD>(sphere<CD>(n), 6, 1e-9);
        ASSERT_TRUE(e.upper);
        EXPECT_NEAR(*e.upper, haagerup_bound(n).value, 1e-15);
        EXPECT_LE(e.lower, *e.upper);
        EXPECT_GT(e.lower, 0.0);
    }
}

TEST(Rho, RadiusIsCappedByBudget) {
    auto K = sphere<CD>(8);
    auto e = rho_estimate<CD>(K, 12, 1e-6, 50);
    EXPECT_LT(e.radius, 12);
    EXPECT_LE(ball_size(2, e.radius) * K.size(), rho_entry_budget);
    EXPECT_LE(ball_size(2, e.radius + 8), rho_row_budget);
}

TEST(Rho, RejectsBadInput) {
    EXPECT_THROW(rho_estimate<CD>({}, 3, 1e-6), std::invalid_argument);
    EXPECT_THROW(rho_estimate<CD>({parse_h("c")}, 3, 1e-6), std::invalid_argument);
    EXPECT_THROW(rho_estimate<CD>(sphere<CD>(1), -1, 1e-6), std::invalid_argument);
}

TEST(Basis, PartitionByRangeClass) {
    auto f = selfsim_a<HWord>();
    for (const auto& w : sample_base_words<HWord>()) {
        auto basis = enumerate_orbit(f, w, 3);
        ASSERT_GT(basis.size(), 1u);
        for (std::size_t i = 0; i < basis.size(); ++i) {
            auto r = germ_range(basis.germs[i], w);
            GermClass want = r.length_at_most(1) == 0 ? GermClass::Eps : r.at(0).is_y() ? GermClass::B : GermClass::C;
            EXPECT_EQ(basis.classes[i], want);
            EXPECT_EQ(basis.find(basis.germs[i]), i);
        }
    }
}

TEST(Basis, HElementsPreserveClasses) {
    auto f = h_elt({{parse_h("c"), 1}, {parse_h("d^-1"), 2}, {parse_h("cd"), Rational(1, 2)}});
    auto g = f + selfsim_a<HWord>();
    std::size_t entries = 0;
    for (const auto& w : sample_base_words<HWord>()) {
        auto basis = enumerate_orbit(g, w, 2);
        auto op = lambda_matrix(f, basis);
        for (std::size_t c = 0; c < op.cols; ++c)
            for (std::size_t k = op.col_start[c]; k < op.col_start[c + 1]; ++k)
                EXPECT_EQ(basis.classes[op.row_index[k]], basis.classes[c]);
        entries += op.nnz();
    }
    EXPECT_GT(entries, 30u);
}

TEST(Basis, LambdaMatchesEvaluation) {
    // Entry (row, col) of lambda_w(f) is f evaluated at the germ row * col^-1.
    Rng rng(51);
    auto w = sample_base_words<HWord>()[0];
    int checked = 0;
    for (int i = 0; i < 20; ++i) {
        auto f = random_stein<HWord>(rng);
        auto basis = enumerate_orbit(f, w, 2);
        auto op = lambda_matrix(f, basis);
        for (std::size_t c = 0; c < basis.size(); ++c) {
            auto r = germ_range(basis.germs[c], w);
            for (std::size_t k = op.col_start[c]; k < op.col_start[c + 1]; ++k) {
                auto s = s_mul(basis.germs[op.row_index[k]], s_inv(basis.germs[c]));
                EXPECT_EQ(op.scale * op.numer[k], oracle::eval_by_germs(f, s, r));
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 20);
}

TEST(Fiber, MatchesRho) {
    for (int n : {1, 2}) {
        auto op = bundle_fiber_operator(bundle_bn(n), BUnit::z(1), 5);
        auto e = opnorm_lower(op, 1e-12, 20000);
        auto r = rho_estimate<CD>(sphere<CD>(n), 5, 1e-12, 20000);
        EXPECT_NEAR(e.lower, r.lower, 1e-6) << n;
    }
    EXPECT_THROW(bundle_fiber_operator(bundle_bn(1), BUnit::y(1), 2), std::invalid_argument);
    // Over Y the average is not supported, so the fiber operator at a Z unit ignores Y terms.
    auto op = bundle_fiber_operator(bundle_chiB<HWord>(), BUnit::z(1), 2);
    EXPECT_EQ(op.nnz(), 0u);
}

TEST(HNorm, Ordering) {
    auto one = h_elt({{parse_h("c"), 1}});
    auto e = stein_H_norm_bound(one);
    ASSERT_TRUE(e.upper);
    EXPECT_EQ(*e.upper, 1.0);
    EXPECT_NEAR(e.lower, 1.0, 1e-9);
    for (int n : {1, 2, 3}) {
        auto d = selfsim_bn(n) - selfsim_bn(n + 2);
        auto b = stein_H_norm_bound(d);
        EXPECT_LE(b.lower, *b.upper);
        EXPECT_GE(b.lower, to_double(st_sup_dist(selfsim_bn(n), selfsim_bn(n + 2))) - 1e-12);
        // Both averages have total mass one: the trivial part vanishes.
        Rational total = 0;
        for (const auto& [h, c] : h_coefficients(d)) total += c;
        EXPECT_EQ(total, 0);
    }
    EXPECT_THROW(stein_H_norm_bound(selfsim_a<HWord>()), std::invalid_argument);
}

TEST(Profile, Structure) {
    for (auto ex : {Example::Selfsim, Example::Bundle}) {
        auto rows = cauchy_profile(ex, {4, 2, 2});
        ASSERT_EQ(rows.size(), 5u);
        EXPECT_EQ(rows[0].n, 2);
        EXPECT_EQ(rows[0].m, 2);
        EXPECT_EQ(rows[0].sup_dist, 0);
        EXPECT_EQ(rows[1].m, 4);
        EXPECT_FALSE(rows[2].m);
        EXPECT_EQ(rows[2].sup_dist, Rational(1, 12));
        EXPECT_EQ(rows[2].upper, haagerup_bound(2).value);
        EXPECT_EQ(rows[4].sup_dist, Rational(1, 108));
        for (const auto& r : rows) EXPECT_LE(r.lower, r.upper + 1e-12);
        EXPECT_LT(rows[4].upper, rows[2].upper);
    }
    EXPECT_THROW(cauchy_profile(Example::Bundle, {0}), std::invalid_argument);
}
