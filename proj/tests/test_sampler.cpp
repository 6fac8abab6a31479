#include <map>
#include <set>

#include <gtest/gtest.h>

#include "cactus/oracle.hpp"
#include "cactus/sampler.hpp"
#include "cactus/templates.hpp"

using namespace cactus;

namespace {

// A labeled rooted cactus is determined by its root label and its edges between labels.
std::string labeled_key(const RealizedCactus& r) {
    std::set<std::pair<int, int>> edges;
    for (auto [u, v] : r.graph.edges()) {
        int a = r.labels[static_cast<std::size_t>(u)], b = r.labels[static_cast<std::size_t>(v)];
        edges.emplace(std::min(a, b), std::max(a, b));
    }
    std::string key = std::to_string(r.labels[static_cast<std::size_t>(r.root)]) + ":";
    for (auto [a, b] : edges) key += std::to_string(a) + "-" + std::to_string(b) + " ";
    return key;
}

}  // namespace

TEST(Sampler, TablesMatchFamilyCounts) {
    for (auto omega : {OmegaSpec::at_least(2), OmegaSpec::finite({3}), OmegaSpec::finite({4, 6})}) {
        auto plane = family_counts({Embedding::Plane, Rooting::Rooted, Mode::Unlabeled, omega, GrammarForm::Template}, 30);
        PlaneRootedSampler ps(omega, 30);
        for (std::size_t n = 1; n <= 30; ++n) EXPECT_EQ(ps.counts()[n], plane.counts[n]) << omega.to_string() << " n=" << n;
        auto labeled = family_counts({Embedding::Free, Rooting::Rooted, Mode::Labeled, omega, GrammarForm::Template}, 12);
        LabeledFreeRootedSampler ls(omega, 12);
        for (std::size_t n = 1; n <= 12; ++n) EXPECT_EQ(ls.counts()[n], labeled.counts[n]) << omega.to_string() << " n=" << n;
    }
}

TEST(Sampler, SameSeedSameCactus) {
    PlaneRootedSampler sampler(OmegaSpec::at_least(3), 80);
    RandomSource a(99), b(99), c(100);
    auto x = sampler.sample(80, a), y = sampler.sample(80, b), z = sampler.sample(80, c);
    EXPECT_EQ(canonical_key(x), canonical_key(y));
    EXPECT_EQ(to_edge_list(structure_to_graph(x).graph), to_edge_list(structure_to_graph(y).graph));
    EXPECT_NE(canonical_key(x), canonical_key(z));
}

TEST(Sampler, SmallestCases) {
    RandomSource rng(1);
    auto pentagon = structure_to_graph(sample_plane_rooted(OmegaSpec::finite({5}), 5, rng)).graph;
    EXPECT_EQ(pentagon, cycle_graph(5));
    EXPECT_THROW(sample_plane_rooted(OmegaSpec::finite({5}), 4, rng), ZeroCountError);
    PlaneRootedSampler small(OmegaSpec::finite({5}), 10);
    EXPECT_THROW(small.sample(11, rng), ResourceError);
    EXPECT_EQ(small.nearest_realizable(7), (std::vector<std::size_t>{5, 9}));

    std::set<int> roots;
    for (int i = 0; i < 200; ++i) {
        auto r = structure_to_graph(sample_labeled_free_rooted(OmegaSpec::finite({3}), 3, rng));
        EXPECT_EQ(r.graph, cycle_graph(3));
        roots.insert(r.labels[static_cast<std::size_t>(r.root)]);
    }
    EXPECT_EQ(roots, (std::set<int>{1, 2, 3}));
}

TEST(Sampler, OutputsAreCactiWithAllowedCycles) {
    RandomSource rng(7);
    for (auto omega : {OmegaSpec::finite({3, 5}), OmegaSpec::at_least(4), OmegaSpec::at_least(2)}) {
        PlaneRootedSampler ps(omega, 60);
        LabeledFreeRootedSampler ls(omega, 60);
        for (int i = 0; i < 20; ++i) {
            std::size_t n = 20 + rng.below(41);
            while (ps.counts()[n] == 0) --n;
            auto p = structure_to_graph(ps.sample(n, rng));
            EXPECT_EQ(p.graph.vertex_count(), n);
            EXPECT_TRUE(is_cactus(p.graph));
            EXPECT_TRUE(p.graph.rotation_complete());
            for (auto len : cycle_lengths(p.graph)) EXPECT_TRUE(omega.contains(static_cast<long>(len))) << len;

            auto l = structure_to_graph(ls.sample(n, rng));
            EXPECT_TRUE(is_cactus(l.graph));
            for (auto len : cycle_lengths(l.graph)) EXPECT_TRUE(omega.contains(static_cast<long>(len))) << len;
            std::vector<int> labels = l.labels;
            std::sort(labels.begin(), labels.end());
            for (std::size_t v = 0; v < n; ++v) EXPECT_EQ(labels[v], static_cast<int>(v) + 1);
        }
    }
}

TEST(Sampler, PlaneRootedIsUniform) {
    const std::size_t n = 7;
    PlaneRootedSampler sampler(OmegaSpec::finite({3}), n);
    const auto classes = sampler.counts()[n].get_ui();
    RandomSource rng(2);
    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < 2000 * classes; ++i) ++seen[canonical_key(sampler.sample(n, rng))];
    ASSERT_EQ(seen.size(), classes);
    std::vector<std::size_t> observed;
    for (auto& [k, c] : seen) observed.push_back(c);
    EXPECT_GT(oracle::chi_square_uniform(observed).p_value, 1e-3);
}

TEST(Sampler, LabeledFreeRootedIsUniform) {
    const std::size_t n = 5;
    LabeledFreeRootedSampler sampler(OmegaSpec::at_least(3), n);
    const auto classes = sampler.counts()[n].get_ui();
    ASSERT_GT(classes, 50u);
    ASSERT_LT(classes, 2000u);
    RandomSource rng(4);
    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < 100 * classes; ++i) ++seen[labeled_key(structure_to_graph(sampler.sample(n, rng)))];
    ASSERT_EQ(seen.size(), classes);
    std::vector<std::size_t> observed;
    for (auto& [k, c] : seen) observed.push_back(c);
    EXPECT_GT(oracle::chi_square_uniform(observed).p_value, 1e-3);
}

TEST(Sampler, SurvivesMoves) {
    std::vector<LabeledFreeRootedSampler> samplers;
    for (long k = 3; k <= 8; ++k) samplers.emplace_back(OmegaSpec::at_least(k), 30);
    RandomSource rng(12);
    for (auto& s : samplers) {
        auto copy = s;
        EXPECT_TRUE(is_cactus(structure_to_graph(copy.sample(30, rng)).graph));
    }
}
