#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace scatter;
using G = GElt<HWord>;
using K = KElt<HWord>;

TEST(Groups, Axioms) {
    Rng rng(3);
    for (int i = 0; i < 500; ++i) {
        auto x = random_gelt<HWord>(rng), y = random_gelt<HWord>(rng), z = random_gelt<HWord>(rng);
        EXPECT_EQ(group_mul(group_mul(x, y), z), group_mul(x, group_mul(y, z)));
        EXPECT_TRUE(group_mul(x, group_inv(x)).is_identity());
        EXPECT_EQ(group_mul(x, G{}), x);
    }
}

TEST(Groups, TauIsExponentSums) {
    G g{parse_h("cd"), parse_f("a^2ba^-1b^3"), 4, -2};
    EXPECT_EQ(hom_tau(g), G::from_z2(1, 4));
    EXPECT_EQ(hom_tau(G::from_f(parse_f("a"))), G::from_z2(1, 0));
    EXPECT_EQ(hom_tau(G::from_f(parse_f("b"))), G::from_z2(0, 1));
    EXPECT_TRUE(hom_tau(G::from_h(parse_h("cdc"))).is_identity());
}

TEST(Groups, ProjectionsDropOneCoordinate) {
    G g{parse_h("c"), parse_f("ab"), 3, -5};
    EXPECT_EQ(hom_pi(1, g), (K{parse_h("c"), parse_f("ab"), 3}));
    EXPECT_EQ(hom_pi(2, g), (K{parse_h("c"), parse_f("ab"), -5}));
    EXPECT_EQ(hom_zeta(1, g), 3);
    EXPECT_EQ(hom_zeta(2, g), -5);
    EXPECT_THROW(hom_pi(3, g), std::invalid_argument);
    EXPECT_THROW(hom_zeta(0, g), std::invalid_argument);
}

TEST(Groups, HomomorphismProperty) {
    Rng rng(4);
    for (int i = 0; i < 500; ++i) {
        auto x = random_gelt<HWord>(rng), y = random_gelt<HWord>(rng);
        auto xy = group_mul(x, y);
        EXPECT_EQ(hom_tau(xy), group_mul(hom_tau(x), hom_tau(y)));
        for (int c = 1; c <= 2; ++c) {
            EXPECT_EQ(hom_pi(c, xy), hom_pi(c, x) * hom_pi(c, y));
            EXPECT_EQ(hom_zeta(c, xy), hom_zeta(c, x) + hom_zeta(c, y));
        }
        // tau lands in Z x Z, which tau kills.
        EXPECT_TRUE(hom_tau(hom_tau(x)).is_identity());
    }
}

TEST(Groups, KernelsOfProjectionsMeetTrivially) {
    Rng rng(6);
    for (int i = 0; i < 500; ++i) {
        auto g = random_gelt<HWord>(rng);
        if (hom_pi(1, g).is_identity() && hom_pi(2, g).is_identity()) EXPECT_TRUE(g.is_identity());
    }
    // ker pi_1 is exactly {(1,1,0,m)}.
    EXPECT_TRUE(hom_pi(1, G::from_z2(0, 7)).is_identity());
    EXPECT_FALSE(hom_pi(2, G::from_z2(0, 7)).is_identity());
}

TEST(Groups, OverflowIsReported) {
    G big = G::from_z2(std::numeric_limits<std::int64_t>::max(), 0);
    EXPECT_THROW(group_mul(big, G::from_z2(1, 0)), std::overflow_error);
    EXPECT_THROW(group_inv(G::from_z2(std::numeric_limits<std::int64_t>::min(), 0)), std::overflow_error);
}

TEST(Groups, Printing) {
    EXPECT_EQ((G{parse_h("cd^-1"), parse_f("a"), 1, -2}).str(), "(cd^-1,a,1,-2)");
    EXPECT_EQ((K{}).str(), "(1,1,0)");
}
