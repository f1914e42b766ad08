#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace scatter;
using G = GElt<HWord>;
using K = KElt<HWord>;
using L = Letter<HWord>;
using S = SElt<HWord>;
using W = Word<HWord>;

namespace {

S sel(const char* text) { return parse_selt(text); }

}  // namespace

TEST(Action, LettersByHand) {
    EXPECT_EQ(sel("a * y1[0]"), sel("y1[0] ^ (1,1,1,0)"));
    EXPECT_EQ(sel("b * y1[0]"), sel("y1[0] ^ (1,1,0,1)"));
    EXPECT_EQ(sel("(1,1,1,0) * y1[4]"), sel("y1[5]"));
    EXPECT_EQ(sel("(1,1,1,0) * y2[4]"), sel("y2[4]"));
    EXPECT_EQ(sel("(1,1,0,-3) * y2[4]"), sel("y2[1]"));
    EXPECT_EQ(sel("(c,a,2,3) * z1[(d,b,1)]"), sel("z1[(cd,ab,3)]"));
    EXPECT_EQ(sel("(c,a,2,3) * z2[(d,b,1)]"), sel("z2[(cd,ab,4)]"));
}

TEST(Action, RestrictionsAfterTwoLettersAreTrivial) {
    Rng rng(21);
    for (int i = 0; i < 300; ++i) {
        auto g = random_gelt<HWord>(rng);
        FinWord<HWord> w{random_letter<HWord>(rng), random_letter<HWord>(rng)};
        auto [image, rest] = act_word(g, w);
        EXPECT_TRUE(rest.is_identity()) << g.str() << " on " << word_str<HWord>(w);
        EXPECT_EQ(image.size(), 2u);
        // One letter leaves tau(g) or 1.
        auto r1 = restrict_letter(g, w[0]);
        EXPECT_TRUE(r1 == hom_tau(g) || r1.is_identity());
    }
}

TEST(Words, CanonicalPeriodicForm) {
    EXPECT_EQ(parse_word("(y1[0].y1[0])^w"), parse_word("(y1[0])^w"));
    EXPECT_EQ(parse_word("y1[0].(y1[1].y1[0])^w"), parse_word("(y1[0].y1[1])^w"));
    EXPECT_EQ(parse_word("y1[0].y1[1].(y1[0].y1[1])^w"), parse_word("(y1[0].y1[1])^w"));
    EXPECT_NE(parse_word("y1[0].(y1[1])^w"), parse_word("(y1[1])^w"));
    auto w = parse_word("z1[(c,1,0)].(y1[1].y2[2])^w");
    EXPECT_EQ(w.at(0), L::Z(1, K{parse_h("c"), {}, 0}));
    EXPECT_EQ(w.at(5), L::Y(1, 1));
    EXPECT_EQ(w.at(6), L::Y(2, 2));
    EXPECT_EQ(w.drop(2), parse_word("(y2[2].y1[1])^w"));
}

TEST(Semigroup, PathProducts) {
    EXPECT_EQ(sel("y1[0]* . y1[0]"), S::one());
    EXPECT_EQ(sel("z1[(1,1,0)]* . y1[0]"), S::null());
    EXPECT_EQ(sel("y1[0]* . y1[0].y1[1]"), sel("y1[1]"));
    EXPECT_EQ(sel("y1[0].y1[1]* . y1[0]"), S::null());
    EXPECT_EQ(sel("(y1[0].y1[1])* . y1[0]"), sel("y1[1]*"));
    auto e = sel("y1[0] . y1[0]*");
    EXPECT_EQ(s_mul(e, e), e);
}

TEST(Semigroup, InverseSemigroupLaws) {
    Rng rng(22);
    for (int i = 0; i < 1000; ++i) {
        auto s = random_selt<HWord>(rng), t = random_selt<HWord>(rng), u = random_selt<HWord>(rng);
        EXPECT_EQ(s_mul(s_mul(s, t), u), s_mul(s, s_mul(t, u)));
        EXPECT_EQ(s_mul(s_mul(s, s_inv(s)), s), s);
        EXPECT_EQ(s_mul(s_mul(s_inv(s), s), s_inv(s)), s_inv(s));
        EXPECT_EQ(s_inv(s_inv(s)), s);
        EXPECT_EQ(s_inv(s_mul(s, t)), s_mul(s_inv(t), s_inv(s)));
        auto e = s_mul(s_inv(s), s), f = s_mul(s_inv(t), t);
        EXPECT_EQ(s_mul(e, f), s_mul(f, e));
        EXPECT_EQ(s_mul(S::null(), s), S::null());
        EXPECT_EQ(s_mul(S::one(), s), s);
    }
}

TEST(Semigroup, ActionIsCompatibleWithProducts) {
    Rng rng(23);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        auto s = random_selt<HWord>(rng, 1), t = random_selt<HWord>(rng, 1);
        auto w = random_word<HWord>(rng, 0, 4);
        auto tw = s_apply(t, w);
        auto st = s_mul(s, t);
        if (!tw) {
            EXPECT_FALSE(s_defined_at(st, w));
            continue;
        }
        auto lhs = s_apply(s, *tw);
        auto rhs = s_apply(st, w);
        EXPECT_EQ(lhs.has_value(), rhs.has_value());
        if (lhs && rhs) {
            EXPECT_EQ(*lhs, *rhs);
            ++checked;
        }
    }
    EXPECT_GT(checked, 50);
}

TEST(Semigroup, DistinctGroupElementsAreSeparated) {
    Rng rng(24);
    for (int i = 0; i < 500; ++i) {
        auto g = random_gelt<HWord>(rng), h = random_gelt<HWord>(rng);
        if (g == h) continue;
        bool separated = false;
        for (int ch = 1; ch <= 2; ++ch) {
            W w(FinWord<HWord>{L::Z(ch, K{})});
            if (*s_apply(S::group(g), w) != *s_apply(S::group(h), w)) separated = true;
        }
        EXPECT_TRUE(separated) << g.str() << " vs " << h.str();
    }
}

TEST(Germs, EquivalenceLawsAndKeys) {
    Rng rng(25);
    int equal_pairs = 0;
    for (int i = 0; i < 400; ++i) {
        auto w = random_word<HWord>(rng, 0, 4);
        std::vector<S> ss;
        for (int tries = 0; tries < 200 && ss.size() < 4; ++tries) {
            auto s = random_selt<HWord>(rng, 1);
            if (s_defined_at(s, w)) ss.push_back(s);
        }
        // Group elements that differ only where the word cannot see.
        auto h = S::group(G::from_h(parse_h("c")));
        std::size_t base = ss.size();
        for (std::size_t j = 0; j < base; ++j) {
            auto v = s_mul(ss[j], h);
            if (s_defined_at(v, w)) ss.push_back(v);
        }
        for (const auto& s : ss) {
            EXPECT_TRUE(germ_eq(s, s, w));
            for (const auto& t : ss) {
                bool eq = germ_eq(s, t, w);
                EXPECT_EQ(eq, germ_eq(t, s, w));
                EXPECT_EQ(eq, germ_key(s, w) == germ_key(t, w)) << s.str() << " / " << t.str() << " at " << w.str();
                if (eq) {
                    ++equal_pairs;
                    EXPECT_EQ(*s_apply(s, w), *s_apply(t, w));
                }
                for (const auto& u : ss)
                    if (eq && germ_eq(t, u, w)) EXPECT_TRUE(germ_eq(s, u, w));
            }
        }
    }
    EXPECT_GT(equal_pairs, 1000);
}

TEST(Germs, UndefinedGermThrows) {
    EXPECT_THROW(germ_eq(sel("y1[0]*"), S::one(), parse_word("y1[1]")), std::domain_error);
}

TEST(Germs, HElementsMeetExactlyOnY) {
    auto c = S::group(G::from_h(parse_h("c"))), d = S::group(G::from_h(parse_h("d")));
    EXPECT_TRUE(germ_eq(c, d, parse_word("y1[3].z1[(1,1,0)]")));
    EXPECT_TRUE(germ_eq(c, d, parse_word("(y2[0])^w")));
    EXPECT_FALSE(germ_eq(c, d, parse_word("z1[(1,1,0)]")));
    EXPECT_FALSE(germ_eq(c, d, parse_word("eps")));
}

TEST(Spectrum, FamiliesByHand) {
    auto r = strongly_fixed_spectrum(G::from_z2(0, 5));
    EXPECT_EQ(r.families[0].kind, FixKind::Cofinite);  // y1
    EXPECT_EQ(r.families[1].kind, FixKind::Nowhere);   // y2
    EXPECT_EQ(r.families[2].kind, FixKind::Cofinite);  // z1
    EXPECT_EQ(r.families[3].kind, FixKind::Nowhere);   // z2
    auto h = strongly_fixed_spectrum(G::from_h(parse_h("c")));
    EXPECT_EQ(h.families[0].kind, FixKind::Cofinite);
    EXPECT_EQ(h.families[2].kind, FixKind::Nowhere);
}

TEST(Spectrum, AgreesWithDirectCount) {
    Rng rng(26);
    for (int i = 0; i < 200; ++i) {
        auto g = random_gelt<HWord>(rng, 2, 2);
        auto r = strongly_fixed_spectrum(g);
        for (int fam = 0; fam < 4; ++fam) {
            int ch = fam % 2 + 1;
            int fixed = 0, total = 0;
            for (std::int64_t n = -15; n <= 15; ++n) {
                L x = fam < 2 ? L::Y(ch, n) : L::Z(ch, K{{}, {}, n});
                ++total;
                if (s_mul(S::group(g), S::path({x})) == S::path({x})) ++fixed;
            }
            if (r.families[static_cast<std::size_t>(fam)].kind == FixKind::Cofinite) EXPECT_EQ(fixed, total);
            else EXPECT_EQ(fixed, 0) << g.str() << " family " << fam;
        }
    }
}

TEST(Spectrum, EffectivenessWitnessMovesALetter) {
    Rng rng(27);
    for (int i = 0; i < 200; ++i) {
        auto g = random_nontrivial_gelt<HWord>(rng);
        int ch = effectiveness_witness(g);
        auto z = L::Z(ch, K{});
        EXPECT_NE(s_mul(S::group(g), S::path({z})), S::path({z}));
    }
    EXPECT_THROW(effectiveness_witness(G{}), std::invalid_argument);
}
