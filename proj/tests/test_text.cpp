#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace scatter;

TEST(Parse, GroupElements) {
    EXPECT_EQ(parse_h("c^2*d^-1"), parse_h("ccd^-1"));
    EXPECT_EQ(parse_h("1"), HWord{});
    auto g = parse_gelt("(c,ab,2,-3)");
    EXPECT_EQ(g.h, parse_h("c"));
    EXPECT_EQ(g.f, parse_f("ab"));
    EXPECT_EQ(g.n, 2);
    EXPECT_EQ(g.m, -3);
    EXPECT_EQ(parse_kelt("(1,a^-2,5)").f, parse_f("a^-1*a^-1"));
}

TEST(Parse, LetterRoundTrip) {
    Rng rng(61);
    for (int i = 0; i < 500; ++i) {
        auto l = random_letter<HWord>(rng, 7, 3);
        EXPECT_EQ(parse_letter(l.str()), l) << l.str();
    }
    // x is an alias for z.
    EXPECT_EQ(parse_letter("x2[(c,1,0)]"), parse_letter("z2[(c,1,0)]"));
}

TEST(Parse, WordRoundTrip) {
    Rng rng(62);
    for (int i = 0; i < 300; ++i) {
        auto w = random_word<HWord>(rng, 0, 4);
        EXPECT_EQ(parse_word(w.str()), w) << w.str();
    }
    EXPECT_EQ(parse_word("y1[0].(y1[0])^w"), parse_word("(y1[0])^w"));
    EXPECT_EQ(parse_word("eps"), Word<HWord>(FinWord<HWord>{}));
}

TEST(Parse, SEltRoundTrip) {
    Rng rng(63);
    for (int i = 0; i < 300; ++i) {
        auto s = random_selt<HWord>(rng);
        EXPECT_EQ(parse_selt(s.str()), s) << s.str();
    }
    EXPECT_TRUE(parse_selt("0").is_zero());
    EXPECT_EQ(parse_selt("1"), SElt<HWord>::one());
}

TEST(Parse, SExpressionsAreProducts) {
    auto y = parse_selt("y1[0]");
    auto g = parse_selt("(c,1,0,1)");
    EXPECT_EQ(parse_selt("y1[0] . (c,1,0,1)"), s_mul(y, g));
    EXPECT_EQ(parse_selt("(y1[0].(c,1,0,1))*"), s_inv(s_mul(y, g)));
    // A postfix star binds to the letter in front of it.
    EXPECT_EQ(parse_selt("y1[0].y1[1]*"), s_mul(y, s_inv(parse_selt("y1[1]"))));
    EXPECT_EQ(parse_selt("c.a"), SElt<HWord>::group({parse_h("c"), parse_f("a"), 0, 0}));
}

TEST(Parse, SteinRoundTrip) {
    Rng rng(64);
    for (int i = 0; i < 200; ++i) {
        auto f = random_stein<HWord>(rng);
        if (i % 3 == 1) f = restrict_region(f, Region::B);
        if (i % 3 == 2) f = restrict_region(f, Region::C);
        auto g = parse_stein(stein_str(f));
        EXPECT_EQ(g.terms, f.terms) << stein_str(f);
        EXPECT_EQ(g.region, f.region);
        EXPECT_EQ(stein_str(g), stein_str(f));
    }
    EXPECT_EQ(stein_str(parse_stein("chi(y1[0]) - 1/2*chi(y1[0])")), "1/2*chi(y1[0])");
    EXPECT_EQ(stein_str(parse_stein("chi(1) - chi(1)")), "0");
}

TEST(Parse, BundleRoundTrip) {
    Rng rng(65);
    for (int i = 0; i < 300; ++i) {
        auto u = random_bset(rng);
        EXPECT_EQ(parse_bset(u.str()), u) << u.str();
        auto a = random_barrow<HWord>(rng);
        EXPECT_EQ(parse_barrow(a.str()), a) << a.str();
        auto f = random_bstein<HWord>(rng);
        if (i % 2) f = bundle_restrict_F(f);
        auto g = parse_bstein(bstein_str(f));
        EXPECT_EQ(g.terms, f.terms) << bstein_str(f);
        EXPECT_EQ(g.restrict, f.restrict);
    }
}

TEST(Parse, BundleSetOperators) {
    auto s = parse_bset("U(y[2];{x[2,3]}) | {z[4]}");
    EXPECT_TRUE(s.contains(BUnit::y(2)));
    EXPECT_TRUE(s.contains(BUnit::x(2, 5)));
    EXPECT_FALSE(s.contains(BUnit::x(2, 3)));
    EXPECT_TRUE(s.contains(BUnit::z(4)));
    auto t = parse_bset("~{z[4]} & U({y[1]};{})");
    EXPECT_FALSE(t.contains(BUnit::z(4)));
    EXPECT_FALSE(t.contains(BUnit::y(1)));
    EXPECT_TRUE(t.contains(BUnit::z(5)));
    EXPECT_TRUE(t.contains(BUnit::eps()));
    EXPECT_EQ(parse_bset("~{} \\ ~{}"), BUnitSet::empty());
}

TEST(Parse, ErrorsCarryPositions) {
    auto pos = [](auto fn) -> std::optional<std::size_t> {
        try {
            fn();
        } catch (const ParseError& e) {
            return e.position();
        }
        return std::nullopt;
    };
    EXPECT_EQ(pos([] { parse_selt("y1[0] ."); }), 7u);
    EXPECT_EQ(pos([] { parse_letter("y3[0]"); }), 0u);
    EXPECT_EQ(pos([] { parse_stein("chi(y1[0]) +"); }), 12u);
    EXPECT_EQ(pos([] { parse_h("cq"); }), 1u);
    EXPECT_EQ(pos([] { parse_letter("y1[99999999999999999999]"); }), 3u);
    EXPECT_EQ(pos([] { parse_gelt("(c,a,1"); }), 6u);
    EXPECT_EQ(pos([] { parse_bset("U(y[1];{x[2,1]})"); }), 0u);
    EXPECT_FALSE(pos([] { parse_selt("  y1[0]  "); }));
}

TEST(Eval, Examples) {
    EXPECT_EQ(cmd_eval("a * y1[0]").output, "y1[0] ^ (1,1,1,0)");
    EXPECT_EQ(cmd_eval("x1[(1,1,0)]* . y1[0]").output, "0");
    EXPECT_EQ(cmd_eval("chi(y1[0]) + chi(y1[0])").output, "2*chi(y1[0])");
    EXPECT_EQ(cmd_eval("chi((1,1,1,0)) - chi((1,1,0,1)) @ [(1,1,1,0), (y1[0])^w]").output, "1");
    EXPECT_EQ(cmd_eval("chi((0,1);U(y[1];{})) @ (0,1):y[1]").output, "1");
    EXPECT_EQ(cmd_eval("chi((0,1);~{}) @F").output, "1*chi((0,1);U({};{})) @F");
    auto bad = cmd_eval("chi(y1[0]");
    EXPECT_EQ(bad.exit_code, 2);
    EXPECT_NE(bad.output.find("position"), std::string::npos);
}

TEST(Eval, AgreesWithLibrary) {
    Rng rng(66);
    for (int i = 0; i < 100; ++i) {
        auto f = random_stein<HWord>(rng);
        auto s = random_selt<HWord>(rng);
        auto w = random_word<HWord>(rng, 3, 5);
        if (!s_defined_at(s, w)) continue;
        auto r = cmd_eval(stein_str(f) + " @ [" + s.str() + ", " + w.str() + "]");
        ASSERT_EQ(r.exit_code, 0) << r.output << " for " << stein_str(f) + " @ [" + s.str() + ", " + w.str() + "]";
        EXPECT_EQ(r.output, to_string(oracle::eval_by_germs(f, s, w)));
    }
}
