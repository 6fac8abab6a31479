// Counts a few families, draws a large plane rooted cactus and round-trips
// a small one through its split tree.
#include <fstream>
#include <iostream>

#include "cactus/cactus.hpp"

using namespace cactus;

int main(int argc, char** argv) {
    const std::string dot_path = argc > 1 ? argv[1] : "cactus309.dot";

    FamilySpec pu5{Embedding::Plane, Rooting::Unrooted, Mode::Unlabeled, OmegaSpec::finite({5}), GrammarForm::Template};
    auto c = family_counts(pu5, 46).counts;
    std::cout << "plane unrooted cacti with pentagons only:";
    for (std::size_t n = 5; n <= 45; n += 4) std::cout << " " << c[n];
    std::cout << "\n";

    FamilySpec trees{Embedding::Free, Rooting::Rooted, Mode::Unlabeled, OmegaSpec::finite({2}), GrammarForm::Simplified};
    auto t = family_counts(trees, 11).counts;
    std::cout << "rooted trees:";
    for (std::size_t n = 2; n <= 10; ++n) std::cout << " " << t[n];
    std::cout << "\n";

    RandomSource rng(2024);
    PlaneRootedSampler sampler(OmegaSpec::at_least(4), 309);
    RealizedCactus big = structure_to_graph(sampler.sample(309, rng));
    auto lengths = cycle_lengths(big.graph);
    std::ofstream dot(dot_path);
    write_dot(big.graph, dot, {"plane rooted cactus, cycles of length >= 4, seed 2024"}, big.root);
    std::cout << "sampled " << big.graph.vertex_count() << " vertices, " << lengths.size() << " cycles -> " << dot_path
              << "\n";

    RealizedCactus small = structure_to_graph(PlaneRootedSampler(OmegaSpec::at_least(3), 12).sample(12, rng));
    GraphLabeledTree reduced = cactus_to_split_tree(small.graph, TreeForm::Reduced);
    std::cout << "\nreduced split tree of a 12-vertex cactus:\n" << to_glt_text(reduced);
    std::cout << "round trip " << (split_tree_to_cactus(reduced) == small.graph ? "ok" : "FAILED") << "\n";
}
