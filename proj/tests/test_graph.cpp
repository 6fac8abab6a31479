#include <gtest/gtest.h>

#include "cactus/graph.hpp"

using namespace cactus;

TEST(Graph, RejectsLoopsAndDuplicates) {
    SimpleGraph g(3);
    g.add_edge(0, 1);
    EXPECT_THROW(g.add_edge(1, 0), Error);
    EXPECT_THROW(g.add_edge(2, 2), Error);
    EXPECT_THROW(g.add_edge(0, 3), Error);
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_THROW(g.set_rotation(0, {2}), Error);
}

TEST(Splits, LongCyclesArePrime) {
    for (std::size_t m = 5; m <= 12; ++m) EXPECT_TRUE(find_splits(cycle_graph(m)).empty()) << "C" << m;
    auto c4 = find_splits(cycle_graph(4));
    ASSERT_EQ(c4.size(), 1u);
    EXPECT_EQ(c4[0].first, (std::vector<int>{0, 2}));
    EXPECT_TRUE(find_splits(path_graph(3)).empty());
}

TEST(Splits, CliquesAndStarsAreDegenerate) {
    for (std::size_t k = 4; k <= 7; ++k) {
        // every bipartition with both sides of size >= 2 is a split
        const std::size_t expected = (std::size_t{1} << (k - 1)) - 1 - k;
        EXPECT_EQ(find_splits(complete_graph(k)).size(), expected) << "K" << k;
        EXPECT_EQ(find_splits(star_graph(k)).size(), expected) << "S" << k;
        EXPECT_TRUE(is_degenerate(complete_graph(k)));
        EXPECT_EQ(star_center(star_graph(k)), 0);
    }
    EXPECT_FALSE(is_degenerate(cycle_graph(5)));
    EXPECT_THROW(find_splits(SimpleGraph(21)), ResourceError);
}

TEST(Cactus, RecognisesCacti) {
    EXPECT_TRUE(is_cactus(cycle_graph(6)));
    EXPECT_TRUE(is_cactus(star_graph(5)));
    EXPECT_FALSE(is_cactus(complete_graph(4)));
    SimpleGraph bowtie(5);
    for (auto [u, v] : std::vector<Edge>{{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 2}}) bowtie.add_edge(u, v);
    EXPECT_TRUE(is_cactus(bowtie));
    EXPECT_EQ(cycle_lengths(bowtie), (std::vector<std::size_t>{3, 3}));
    bowtie.add_edge(1, 3);
    auto check = check_cactus(bowtie);
    EXPECT_FALSE(check.is_cactus);
    EXPECT_FALSE(check.offending_block.empty());
    EXPECT_THROW(check_cactus(SimpleGraph(2)), NotCactusError);
}

TEST(Cactus, BlocksAndClusters) {
    SimpleGraph g(6);
    for (auto [u, v] : std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {3, 0}, {2, 4}, {4, 5}}) g.add_edge(u, v);
    auto d = blocks_and_clusters(g);
    ASSERT_EQ(d.blocks.size(), 3u);
    std::size_t cycles = 0;
    for (const auto& b : d.blocks) cycles += b.is_cycle;
    EXPECT_EQ(cycles, 1u);
    EXPECT_EQ(d.blocks_at[2].size(), 2u);
    EXPECT_EQ(d.blocks_at[0].size(), 1u);
}

TEST(EdgeList, RoundTripWithRotation) {
    SimpleGraph g = cycle_graph(4);
    g.add_vertex();
    g.add_edge(0, 4);
    g.set_rotation(0, {4, 1, 3});
    g.set_rotation(1, {0, 2});
    g.set_rotation(2, {1, 3});
    g.set_rotation(3, {2, 0});
    g.set_rotation(4, {0});
    auto back = parse_edge_list(to_edge_list(g, {"a comment"}));
    EXPECT_EQ(back, g);
    ASSERT_TRUE(back.rotation_complete());
    EXPECT_TRUE(same_rotation(back, g));
    g.set_rotation(0, {1, 4, 3});
    EXPECT_FALSE(same_rotation(back, g));
    EXPECT_THROW(parse_edge_list("3 2\n0 1\n"), Error);
    EXPECT_THROW(parse_edge_list("2 1\n0 5\n"), Error);
}
