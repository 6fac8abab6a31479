#include <gtest/gtest.h>

#include "cactus/grammar.hpp"
#include "cactus/omega.hpp"

using namespace cactus;

TEST(Omega, ParsesFiniteAndThresholdSets) {
    auto a = parse_omega("{3,5,7}");
    EXPECT_TRUE(a.is_finite());
    EXPECT_TRUE(a.contains(5));
    EXPECT_FALSE(a.contains(4));
    auto b = parse_omega(">=4");
    EXPECT_FALSE(b.is_finite());
    EXPECT_TRUE(b.contains(400));
    EXPECT_FALSE(b.contains(3));
    EXPECT_EQ(b.minus_one().to_string(), ">=3");
    EXPECT_EQ(parse_omega(" { 5 } ").to_string(), "{5}");
}

TEST(Omega, RejectsMalformedOrTooSmallSets) {
    EXPECT_THROW(parse_omega("5"), ValidationError);
    EXPECT_THROW(parse_omega("{3,}"), ValidationError);
    EXPECT_THROW(parse_omega("{1}").require_valid(), ValidationError);
    EXPECT_THROW(parse_omega("{}").require_valid(), ValidationError);
    EXPECT_NO_THROW(parse_omega("{2}").require_valid());
}

TEST(GrammarParser, ReadsDirectivesRulesAndRoot) {
    auto g = parse_grammar(R"(
        @mode labeled;   # comment
        @omega {3,4};
        @root A - 2*B + Z;
        A = Z * Set(>=1; USeq(in Omega-1; Z + A));
        B = Z * A;
    )");
    EXPECT_EQ(g.mode, Mode::Labeled);
    ASSERT_TRUE(g.omega);
    EXPECT_EQ(g.omega->to_string(), "{3,4}");
    ASSERT_EQ(g.root.size(), 3u);
    EXPECT_EQ(g.root[1].coefficient, -2);
    EXPECT_EQ(g.root[2].kind, RootTerm::Kind::Atom);
    EXPECT_TRUE(g.root_has_subtraction());
    const Expr& a = g.body("A");
    ASSERT_EQ(a.kind, Expr::Kind::Prod);
    EXPECT_EQ(a.items[1]->op, OpKind::Set);
    EXPECT_EQ(a.items[1]->card, CardSpec::at_least(1));
    EXPECT_EQ(a.items[1]->arg().card, CardSpec::omega_minus_one());
}

TEST(GrammarParser, DefaultsForCardinalityAndRoot) {
    auto g = parse_grammar("T = Z * Seq(T); C = Cyc(Z);");
    EXPECT_EQ(g.root.size(), 1u);
    EXPECT_EQ(g.root[0].name, "T");
    EXPECT_EQ(g.body("T").items[1]->card, CardSpec::at_least(0));
    EXPECT_EQ(g.body("C").card, CardSpec::at_least(1));
}

TEST(GrammarParser, PrintThenParseIsIdentity) {
    const char* text = R"(
        @mode unlabeled;
        @omega >=3;
        @root T_P + T_S - T_SP + T_Z;
        Q = Z * Seq(>=0; Seq(in Omega-1; Q));
        P = Seq(in Omega-1; Q);
        T_P = Cyc(in Omega; Q);
        T_S = Z * Cyc(>=2; P);
        T_SP = Q * P;
        T_Z = Z * (P + 1) * UCyc(=3; Z) * Set(in {1,2}; Z);
    )";
    auto g = parse_grammar(text);
    auto again = parse_grammar(print_grammar(g));
    EXPECT_EQ(g, again);
    EXPECT_EQ(print_grammar(g), print_grammar(again));
}

TEST(GrammarParser, ReportsLineAndColumn) {
    try {
        parse_grammar("A = Z;\nB = Z * ;\n");
        FAIL() << "expected a syntax error";
    } catch (const GrammarSyntaxError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.column(), 9u);
    }
    EXPECT_THROW(parse_grammar("A = Z - B; B = Z;"), GrammarSyntaxError);
    EXPECT_THROW(parse_grammar("A = Z * C;"), GrammarSyntaxError);
    EXPECT_THROW(parse_grammar("A = Z; A = Z;"), GrammarSyntaxError);
    EXPECT_THROW(parse_grammar("@mode weird; A = Z;"), GrammarSyntaxError);
    EXPECT_THROW(parse_grammar(""), GrammarSyntaxError);
}

TEST(GrammarValidation, AcceptsWellFoundedSystems) {
    EXPECT_TRUE(validate(parse_grammar("B = Z * Seq(B);")).empty());
    EXPECT_TRUE(validate(parse_grammar("@omega {5}; G = Z * Cyc(>=1; Seq(in Omega-1; G + Z));")).empty());
}

TEST(GrammarValidation, FlagsStructuralProblems) {
    auto has = [](const std::vector<std::string>& d, const std::string& what) {
        for (const auto& m : d)
            if (m.find(what) != std::string::npos) return true;
        return false;
    };
    EXPECT_TRUE(has(validate(parse_grammar("A = Z * Seq(in Omega; A);")), "no @omega"));
    EXPECT_TRUE(has(validate(parse_grammar("A = Z * A;")), "valuation is infinite"));
    EXPECT_TRUE(has(validate(parse_grammar("A = Seq(Seq(Z));")), "valuation 0"));
    EXPECT_TRUE(has(validate(parse_grammar("A = Cyc(>=0; Z);")), "admits cardinality 0"));
    EXPECT_TRUE(has(validate(parse_grammar("A = B + Z; B = A;")), "not well-founded"));
    EXPECT_THROW(require_valid(parse_grammar("A = Z * A;")), ValidationError);
}

TEST(GrammarValidation, ValuationIsLeastFixedPoint) {
    auto g = parse_grammar("@omega {4}; G = Z * Cyc(>=1; Seq(in Omega-1; Q)); Q = Z * Seq(Seq(in Omega-1; Q));");
    auto val = valuation(g);
    EXPECT_EQ(val["Q"], Valuation(1));
    EXPECT_EQ(val["G"], Valuation(4));
}
