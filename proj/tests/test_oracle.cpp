#include <gtest/gtest.h>

#include "cactus/counting.hpp"
#include "cactus/oracle.hpp"

using namespace cactus;

TEST(Census, SmallExamples) {
    auto c = oracle::census(OmegaSpec::at_least(2), 4);
    EXPECT_EQ(c.labeled[1], 1);
    EXPECT_EQ(c.unlabeled[1], 1);
    EXPECT_EQ(c.labeled[3], 4);    // three paths and the triangle
    EXPECT_EQ(c.unlabeled[3], 2);
    EXPECT_EQ(c.labeled_rooted[3], 12);
    EXPECT_EQ(c.unlabeled_rooted[3], 3);
    auto tri = oracle::census(OmegaSpec::finite({3}), 5);
    EXPECT_EQ(tri.labeled[3], 1);
    EXPECT_EQ(tri.unlabeled[4], 0);
    EXPECT_EQ(tri.unlabeled[5], 1);  // bowtie
    EXPECT_EQ(tri.labeled[5], 15);
    EXPECT_THROW(oracle::census(OmegaSpec::at_least(2), 8), ResourceError);
}

TEST(Burnside, KnownOrbitCounts) {
    using G = oracle::Group;
    EXPECT_EQ(oracle::burnside_orbits(3, 2, G::Cyclic), 4u);
    EXPECT_EQ(oracle::burnside_orbits(3, 2, G::Reversal), 6u);
    EXPECT_EQ(oracle::burnside_orbits(3, 2, G::Symmetric), 4u);
    EXPECT_EQ(oracle::burnside_orbits(3, 2, G::Trivial), 8u);
    EXPECT_EQ(oracle::burnside_orbits(6, 2, G::Dihedral), 13u);
    EXPECT_EQ(oracle::burnside_orbits(1, 3, G::Cyclic), 3u);
    EXPECT_THROW(oracle::burnside_orbits(20, 3, G::Trivial), ResourceError);
    EXPECT_EQ(oracle::group_from_string("dihedral"), G::Dihedral);
    EXPECT_FALSE(oracle::group_from_string("nope").has_value());
}

TEST(Burnside, CyclicMatchesNecklaceFormula) {
    for (std::size_t m = 1; m <= 8; ++m)
        for (std::size_t q = 1; q <= 3; ++q) {
            std::uint64_t sum = 0;
            for (long d : divisors(static_cast<long>(m))) {
                std::uint64_t p = 1;
                for (std::size_t i = 0; i < m / static_cast<std::size_t>(d); ++i) p *= q;
                sum += static_cast<std::uint64_t>(euler_phi(d)) * p;
            }
            EXPECT_EQ(oracle::burnside_orbits(m, q, oracle::Group::Cyclic), sum / m) << m << " " << q;
        }
}

TEST(Burnside, LabeledArrangements) {
    using G = oracle::Group;
    EXPECT_EQ(oracle::labeled_arrangement_orbits(4, G::Trivial), 24u);
    EXPECT_EQ(oracle::labeled_arrangement_orbits(4, G::Cyclic), 6u);
    EXPECT_EQ(oracle::labeled_arrangement_orbits(4, G::Dihedral), 3u);
    EXPECT_EQ(oracle::labeled_arrangement_orbits(4, G::Reversal), 12u);
    EXPECT_EQ(oracle::labeled_arrangement_orbits(4, G::Symmetric), 1u);
}

TEST(Oracle, RootedTreesAndMultisets) {
    auto t = oracle::rooted_tree_counts(8);
    EXPECT_EQ(t, (std::vector<Integer>{0, 1, 1, 2, 4, 9, 20, 48, 115}));
    // partitions: multisets of parts of every size 1
    auto p = oracle::multiset_product({0, 1, 1, 1, 1, 1, 1}, 7);
    EXPECT_EQ(p, (std::vector<Integer>{1, 1, 2, 3, 5, 7, 11}));
}

TEST(Oracle, EnumeratesStructures) {
    auto catalan = oracle::enumerate_structures(parse_grammar("B = Z * Seq(B);"), 4);
    EXPECT_EQ(catalan.size(), 5u);
    auto pu5 = oracle::enumerate_structures(parse_grammar("@omega {5}; G = Z * Cyc(>=1; Seq(in Omega-1; Q)); Q = Z * Seq(Seq(in Omega-1; Q));"), 5);
    EXPECT_EQ(pu5.size(), 1u);
    for (const auto& s : catalan) EXPECT_EQ(size(s), 4u);
    EXPECT_THROW(oracle::enumerate_structures(parse_grammar("B = Z * Seq(B);"), 14, 100), ResourceError);
    EXPECT_THROW(oracle::enumerate_structures(parse_grammar("@mode labeled; B = Z * Set(B);"), 3), ValidationError);
    EXPECT_THROW(oracle::enumerate_structures(parse_grammar("@root B - Z; B = Z * Seq(B);"), 3), ValidationError);
}

TEST(Oracle, ChiSquare) {
    auto flat = oracle::chi_square_uniform({100, 100, 100, 100});
    EXPECT_DOUBLE_EQ(flat.statistic, 0.0);
    EXPECT_EQ(flat.dof, 3u);
    EXPECT_NEAR(flat.p_value, 1.0, 1e-12);
    auto skew = oracle::chi_square_uniform({10, 190});
    EXPECT_LT(skew.p_value, 1e-6);
}
