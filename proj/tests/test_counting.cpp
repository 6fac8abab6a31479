#include <random>

#include <gtest/gtest.h>

#include "cactus/counting.hpp"
#include "cactus/oracle.hpp"

using namespace cactus;

namespace {

Integer coefficient(const PowerSeries& s, std::size_t n, Mode mode) {
    Coefficient c = s[n];
    if (mode == Mode::Labeled) c *= Coefficient(factorial(static_cast<long>(n)));
    EXPECT_TRUE(is_integral(c));
    return c.get_num();
}

oracle::Group group_of(OpKind op) {
    switch (op) {
        case OpKind::Seq: return oracle::Group::Trivial;
        case OpKind::Set: return oracle::Group::Symmetric;
        case OpKind::Cyc: return oracle::Group::Cyclic;
        case OpKind::USeq: return oracle::Group::Reversal;
        case OpKind::UCyc: return oracle::Group::Dihedral;
    }
    return oracle::Group::Trivial;
}

}  // namespace

TEST(Counting, ArithmeticHelpers) {
    EXPECT_EQ(euler_phi(1), 1);
    EXPECT_EQ(euler_phi(12), 4);
    EXPECT_EQ(divisors(12), (std::vector<long>{1, 2, 3, 4, 6, 12}));
    EXPECT_EQ(factorial(6), 720);
}

// Operator applied to q atoms of size 1, cardinality exactly m.
TEST(Counting, UnlabeledOperatorsMatchOrbitCounts) {
    for (OpKind op : {OpKind::Seq, OpKind::Set, OpKind::Cyc, OpKind::USeq, OpKind::UCyc})
        for (std::size_t q = 1; q <= 3; ++q)
            for (long m = 1; m <= 8; ++m) {
                if ((op == OpKind::USeq && m < 2) || (op == OpKind::UCyc && m < 3)) continue;
                auto s = operator_series(op, m, PowerSeries::monomial(8, 1, q), Mode::Unlabeled);
                EXPECT_EQ(coefficient(s, static_cast<std::size_t>(m), Mode::Unlabeled),
                          oracle::burnside_orbits(static_cast<std::size_t>(m), q, group_of(op)))
                    << to_string(op) << " m=" << m << " q=" << q;
            }
}

TEST(Counting, LabeledOperatorsMatchArrangementOrbits) {
    for (OpKind op : {OpKind::Seq, OpKind::Set, OpKind::Cyc, OpKind::USeq, OpKind::UCyc})
        for (std::size_t q = 1; q <= 3; ++q)
            for (long m = 1; m <= 8; ++m) {
                if ((op == OpKind::USeq && m < 2) || (op == OpKind::UCyc && m < 3)) continue;
                auto s = operator_series(op, m, PowerSeries::monomial(8, 1, q), Mode::Labeled);
                Integer words;
                mpz_ui_pow_ui(words.get_mpz_t(), q, static_cast<unsigned long>(m));
                Integer expected =
                    words * static_cast<unsigned long>(oracle::labeled_arrangement_orbits(static_cast<std::size_t>(m), group_of(op)));
                EXPECT_EQ(coefficient(s, static_cast<std::size_t>(m), Mode::Labeled), expected)
                    << to_string(op) << " m=" << m << " q=" << q;
            }
}

TEST(Counting, MultisetSumIsEulerProduct) {
    std::mt19937 gen(3);
    std::uniform_int_distribution<int> d(0, 4);
    for (int trial = 0; trial < 20; ++trial) {
        PowerSeries a(30);
        std::vector<Integer> raw(31, 0);
        for (std::size_t n = 1; n <= 30; ++n) {
            raw[n] = d(gen);
            a[n] = raw[n];
        }
        auto set = restricted_operator(OpKind::Set, IntegerSet::at_least(0), a, Mode::Unlabeled);
        auto expected = oracle::multiset_product(raw, 31);
        for (std::size_t n = 0; n <= 30; ++n) EXPECT_EQ(set[n], Coefficient(expected[n])) << "n=" << n;
    }
}

TEST(Counting, LabeledSetIsExponential) {
    auto set = restricted_operator(OpKind::Set, IntegerSet::at_least(0), PowerSeries::monomial(10, 1), Mode::Labeled);
    for (std::size_t n = 0; n <= 10; ++n) EXPECT_EQ(set[n] * Coefficient(factorial(static_cast<long>(n))), 1);
}

TEST(Counting, EvaluatesCatalanAndMotzkin) {
    auto env = evaluate(parse_grammar("B = Z * Seq(B);"), 10);
    auto c = counts(env);
    std::vector<long> catalan{0, 1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862};
    for (std::size_t n = 0; n <= 10; ++n) EXPECT_EQ(c[n], catalan[n]);
    EXPECT_TRUE(env.converged);

    auto m = counts(evaluate(parse_grammar("M = Z * (1 + M + M * M);"), 8));
    std::vector<long> motzkin{0, 1, 1, 2, 4, 9, 21, 51, 127};
    for (std::size_t n = 0; n <= 8; ++n) EXPECT_EQ(m[n], motzkin[n]);
}

TEST(Counting, LabeledRootedTreesAreCayley) {
    auto c = counts(evaluate(parse_grammar("@mode labeled; T = Z * Set(T);"), 9));
    for (long n = 1; n <= 9; ++n) {
        Integer expected;
        mpz_ui_pow_ui(expected.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(n - 1));
        EXPECT_EQ(c[static_cast<std::size_t>(n)], expected);
    }
}

TEST(Counting, RootSubtractionFollowsDissymmetry) {
    // Free unrooted cacti with Omega={2} are the unrooted trees.
    auto g = parse_grammar(
        "@omega {2}; @root T_P - T_SP + Q - Z;"
        "Q = Z * Set(>=0; USeq(in Omega-1; Q));"
        "T_P = UCyc(in Omega; Q);"
        "T_SP = Q * USeq(in Omega-1; Q);");
    auto c = counts(evaluate(g, 12));
    std::vector<long> trees{0, 0, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551};
    for (std::size_t n = 0; n <= 12; ++n) EXPECT_EQ(c[n], trees[n]) << n;
}

TEST(Counting, EvaluationOrderDoesNotMatter) {
    auto g = parse_grammar("@omega >=3; G = Z * Cyc(>=1; Seq(in Omega-1; Q)); Q = Z * Seq(Seq(in Omega-1; Q));");
    EXPECT_EQ(counts(evaluate(g, 20, {"G", "Q"})), counts(evaluate(g, 20, {"Q", "G"})));
    EXPECT_THROW(evaluate(g, 5, {"G"}), Error);
}

TEST(Counting, NegativeRootCoefficientsAreRejected) {
    EXPECT_THROW(evaluate(parse_grammar("@root A - 2*A; A = Z * Seq(A);"), 6), SemanticsError);
}
