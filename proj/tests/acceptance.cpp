// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "cactus/cactus.hpp"

using namespace cactus;

namespace {

// Pinned limits.
constexpr double pu5_seconds = 5.0;
constexpr double big_sample_seconds = 60.0;
constexpr double chi_square_alpha = 1e-3;
constexpr std::size_t uniformity_samples = 100000;
constexpr std::size_t round_trips_per_family = 1000;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

Integer add_single_vertex(const std::vector<Integer>& c, std::size_t n) { return c[n] + (n == 1 && c[1] == 0 ? 1 : 0); }

std::string plane_rooted_grammar(const OmegaSpec& omega) {
    return "@omega " + omega.to_string() +
           "; G = Z * Cyc(>=1; Seq(in Omega-1; Q)); Q = Z * Seq(>=0; Seq(in Omega-1; Q));";
}

Outcome pentagon_counts() {
    Outcome o;
    const std::vector<long> expected{1, 1, 3, 17, 102, 811, 6626, 58385, 532251, 5011934, 48344880};
    auto t0 = Clock::now();
    auto c = family_counts({Embedding::Plane, Rooting::Unrooted, Mode::Unlabeled, OmegaSpec::finite({5}), GrammarForm::Template}, 45)
                 .counts;
    const double s = seconds_since(t0);
    for (std::size_t k = 1; k <= 11; ++k)
        if (c[4 * k + 1] != expected[k - 1]) o.fail("n=" + std::to_string(4 * k + 1) + " gives " + c[4 * k + 1].get_str());
    if (s > pu5_seconds) o.fail("took " + std::to_string(s) + " s");
    if (o.pass) o.detail = "11 terms exact in " + std::to_string(s) + " s";
    return o;
}

Outcome tree_degeneration() {
    Outcome o;
    auto c = family_counts({Embedding::Free, Rooting::Rooted, Mode::Unlabeled, OmegaSpec::finite({2}), GrammarForm::Template}, 30)
                 .counts;
    auto trees = oracle::rooted_tree_counts(30);
    for (std::size_t n = 2; n <= 30; ++n)
        if (c[n] != trees[n]) o.fail("n=" + std::to_string(n));
    if (o.pass) o.detail = "n=2..30 equal rooted tree recurrence";
    return o;
}

Outcome template_equivalence() {
    Outcome o;
    const std::vector<OmegaSpec> omegas{OmegaSpec::finite({3}), OmegaSpec::finite({4}), OmegaSpec::finite({5}),
                                        OmegaSpec::finite({3, 5}), OmegaSpec::at_least(3), OmegaSpec::at_least(4)};
    std::size_t combos = 0;
    for (auto e : {Embedding::Plane, Embedding::Free})
        for (auto r : {Rooting::Rooted, Rooting::Unrooted})
            for (auto m : {Mode::Unlabeled, Mode::Labeled})
                for (const auto& omega : omegas) {
                    auto a = family_counts({e, r, m, omega, GrammarForm::Template}, 40).counts;
                    auto b = family_counts({e, r, m, omega, GrammarForm::Simplified}, 40).counts;
                    ++combos;
                    for (std::size_t n = 2; n <= 40; ++n)
                        if (a[n] != b[n]) o.fail(FamilySpec{e, r, m, omega, GrammarForm::Template}.describe() + " n=" + std::to_string(n));
                }
    if (o.pass) o.detail = std::to_string(combos) + " combinations agree for n=2..40";
    return o;
}

Outcome oracle_agreement() {
    Outcome o;
    for (const auto& omega : {OmegaSpec::at_least(2), OmegaSpec::finite({3}), OmegaSpec::at_least(3)}) {
        auto census = oracle::census(omega, 7);
        auto fam = [&](Rooting r, Mode m) {
            return family_counts({Embedding::Free, r, m, omega, GrammarForm::Template}, 7).counts;
        };
        auto lu = fam(Rooting::Unrooted, Mode::Labeled), uu = fam(Rooting::Unrooted, Mode::Unlabeled);
        auto lr = fam(Rooting::Rooted, Mode::Labeled), ur = fam(Rooting::Rooted, Mode::Unlabeled);
        for (std::size_t n = 1; n <= 7; ++n) {
            const std::string where = " Omega=" + omega.to_string() + " n=" + std::to_string(n);
            if (add_single_vertex(lu, n) != census.labeled[n]) o.fail("labeled unrooted" + where);
            if (add_single_vertex(uu, n) != census.unlabeled[n]) o.fail("unlabeled unrooted" + where);
            if (add_single_vertex(lr, n) != census.labeled_rooted[n]) o.fail("labeled rooted" + where);
            if (add_single_vertex(ur, n) != census.unlabeled_rooted[n]) o.fail("unlabeled rooted" + where);
        }
    }
    for (const auto& omega : {OmegaSpec::finite({3}), OmegaSpec::finite({4}), OmegaSpec::at_least(2)}) {
        auto g = parse_grammar(plane_rooted_grammar(omega));
        auto c = family_counts({Embedding::Plane, Rooting::Rooted, Mode::Unlabeled, omega, GrammarForm::Template}, 10).counts;
        for (std::size_t n = 1; n <= 10; ++n) {
            auto all = oracle::enumerate_structures(g, n);
            std::set<std::string> keys;
            for (const auto& s : all) keys.insert(canonical_key(s));
            if (Integer(static_cast<unsigned long>(keys.size())) != c[n] || keys.size() != all.size())
                o.fail("plane rooted Omega=" + omega.to_string() + " n=" + std::to_string(n));
        }
    }
    if (o.pass) o.detail = "census n<=7 (3 Omega x 4 variants) and plane rooted enumeration n<=10";
    return o;
}

Outcome split_properties() {
    Outcome o;
    for (std::size_t m = 5; m <= 12; ++m)
        if (!find_splits(cycle_graph(m)).empty()) o.fail("C" + std::to_string(m) + " has a split");
    if (find_splits(cycle_graph(4)).size() != 1) o.fail("C4 split count");
    for (std::size_t k = 3; k <= 7; ++k) {
        if (!is_degenerate(complete_graph(k)) || !is_clique(complete_graph(k))) o.fail("K" + std::to_string(k));
        if (!is_degenerate(star_graph(k)) || !star_center(star_graph(k))) o.fail("S" + std::to_string(k));
        if (k >= 4) {
            const std::size_t every = (std::size_t{1} << (k - 1)) - 1 - k;
            if (find_splits(complete_graph(k)).size() != every || find_splits(star_graph(k)).size() != every)
                o.fail("degenerate split count at k=" + std::to_string(k));
        }
    }
    if (o.pass) o.detail = "C5..C12 prime, C4 one split, K_k and S_k degenerate for k<=7";
    return o;
}

void check_round_trip(const SimpleGraph& g, bool plane, Outcome& o, const std::string& what) {
    for (auto form : {TreeForm::Reduced, TreeForm::Simplified}) {
        auto t = cactus_to_split_tree(g, form);
        auto d = validate_cactus_tree(t, form);
        if (!d.valid) {
            o.fail(what + " " + to_string(form) + ": " + d.messages.front());
            continue;
        }
        if (!(accessibility(t) == g)) o.fail(what + " accessibility differs");
        if (plane && !same_rotation(split_tree_to_cactus(t), g)) o.fail(what + " rotation differs");
        auto other = form == TreeForm::Reduced ? TreeForm::Simplified : TreeForm::Reduced;
        auto converted = convert_form(t, other);
        if (!validate_cactus_tree(converted, other).valid) o.fail(what + " converted tree invalid");
        if (canonical_string(convert_form(converted, form)) != canonical_string(t)) o.fail(what + " convert_form round trip");
        if (!(accessibility(converted) == g)) o.fail(what + " converted accessibility differs");
    }
}

Outcome round_trips() {
    Outcome o;
    const std::vector<OmegaSpec> omegas{OmegaSpec::at_least(2), OmegaSpec::at_least(3), OmegaSpec::finite({3}),
                                        OmegaSpec::finite({4}), OmegaSpec::finite({3, 5}), OmegaSpec::at_least(5)};
    std::vector<PlaneRootedSampler> plane;
    std::vector<LabeledFreeRootedSampler> labeled;
    for (const auto& omega : omegas) {
        plane.emplace_back(omega, 60);
        labeled.emplace_back(omega, 60);
    }
    RandomSource rng(606);
    std::size_t done = 0;
    auto pick = [&](const std::vector<Integer>& counts) {
        std::size_t n = 5 + rng.below(56);
        while (n > 5 && counts[n] == 0) --n;
        while (counts[n] == 0) ++n;
        return n;
    };
    for (std::size_t i = 0; i < round_trips_per_family; ++i) {
        const std::size_t f = i % omegas.size();
        const std::size_t np = pick(plane[f].counts());
        SimpleGraph p = structure_to_graph(plane[f].sample(np, rng)).graph;
        check_round_trip(p, true, o, "plane rooted n=" + std::to_string(np));
        const std::size_t nl = pick(labeled[f].counts());
        SimpleGraph l = structure_to_graph(labeled[f].sample(nl, rng)).graph;
        check_round_trip(l, false, o, "labeled free rooted n=" + std::to_string(nl));
        done += 2;
    }
    if (o.pass) o.detail = std::to_string(done) + " cacti, both forms, 0 failures";
    return o;
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

Outcome operator_semantics() {
    Outcome o;
    std::size_t checks = 0;
    for (OpKind op : {OpKind::Seq, OpKind::Set, OpKind::Cyc, OpKind::USeq, OpKind::UCyc})
        for (std::size_t q = 1; q <= 3; ++q)
            for (long m = 1; m <= 8; ++m) {
                if ((op == OpKind::USeq && m < 2) || (op == OpKind::UCyc && m < 3)) continue;
                const auto mm = static_cast<std::size_t>(m);
                auto u = operator_series(op, m, PowerSeries::monomial(8, 1, q), Mode::Unlabeled);
                if (u[mm] != Coefficient(Integer(static_cast<unsigned long>(oracle::burnside_orbits(mm, q, group_of(op))))))
                    o.fail(std::string(to_string(op)) + " unlabeled m=" + std::to_string(m) + " q=" + std::to_string(q));
                auto l = operator_series(op, m, PowerSeries::monomial(8, 1, q), Mode::Labeled);
                Integer words;
                mpz_ui_pow_ui(words.get_mpz_t(), q, mm);
                Integer expected = words * static_cast<unsigned long>(oracle::labeled_arrangement_orbits(mm, group_of(op)));
                if (l[mm] * Coefficient(factorial(m)) != Coefficient(expected))
                    o.fail(std::string(to_string(op)) + " labeled m=" + std::to_string(m) + " q=" + std::to_string(q));
                checks += 2;
            }
    std::mt19937 gen(30);
    std::uniform_int_distribution<int> d(0, 5);
    for (int trial = 0; trial < 20; ++trial) {
        PowerSeries a(30);
        std::vector<Integer> raw(31, 0);
        for (std::size_t n = 1; n <= 30; ++n) a[n] = raw[n] = d(gen);
        auto set = restricted_operator(OpKind::Set, IntegerSet::at_least(0), a, Mode::Unlabeled);
        auto expected = oracle::multiset_product(raw, 31);
        for (std::size_t n = 0; n <= 30; ++n)
            if (set[n] != Coefficient(expected[n])) o.fail("Set trial " + std::to_string(trial) + " n=" + std::to_string(n));
    }
    if (o.pass) o.detail = std::to_string(checks) + " orbit checks and 20 Set series at N=30";
    return o;
}

Outcome uniformity() {
    Outcome o;
    std::ostringstream detail;
    for (auto [omega, n] : {std::pair{OmegaSpec::finite({3}), std::size_t{7}}, std::pair{OmegaSpec::finite({4}), std::size_t{10}}}) {
        std::map<std::string, std::size_t> observed;
        for (const auto& s : oracle::enumerate_structures(parse_grammar(plane_rooted_grammar(omega)), n))
            observed[canonical_key(s)] = 0;
        PlaneRootedSampler sampler(omega, n);
        RandomSource rng(8);
        for (std::size_t i = 0; i < uniformity_samples; ++i) {
            auto it = observed.find(canonical_key(sampler.sample(n, rng)));
            if (it == observed.end()) {
                o.fail("sample outside the enumerated set");
                break;
            }
            ++it->second;
        }
        std::vector<std::size_t> counts;
        for (auto& [k, c] : observed) counts.push_back(c);
        auto chi = oracle::chi_square_uniform(counts);
        if (chi.p_value <= chi_square_alpha) o.fail("Omega=" + omega.to_string() + " p=" + std::to_string(chi.p_value));
        detail << "Omega=" << omega.to_string() << " n=" << n << " classes=" << counts.size() << " p=" << chi.p_value << "; ";
    }
    auto draw = [](std::uint64_t seed) {
        RandomSource rng(seed);
        auto r = structure_to_graph(sample_plane_rooted(OmegaSpec::at_least(3), 200, rng));
        std::ostringstream out;
        write_dot(r.graph, out, {}, r.root);
        return to_edge_list(r.graph) + out.str();
    };
    if (draw(12345) != draw(12345)) o.fail("same seed gave different output");
    if (o.pass) o.detail = detail.str() + "deterministic";
    return o;
}

Outcome large_samples() {
    Outcome o;
    std::ostringstream detail;
    RandomSource rng(309933);
    for (std::size_t n : {std::size_t{309}, std::size_t{933}}) {
        auto t0 = Clock::now();
        PlaneRootedSampler sampler(OmegaSpec::at_least(4), n);
        auto r = structure_to_graph(sampler.sample(n, rng));
        const double s = seconds_since(t0);
        if (s > big_sample_seconds) o.fail("n=" + std::to_string(n) + " took " + std::to_string(s) + " s");
        if (r.graph.vertex_count() != n || !is_cactus(r.graph)) o.fail("n=" + std::to_string(n) + " is not a cactus");
        auto lengths = cycle_lengths(r.graph);
        for (auto len : lengths)
            if (len < 4) o.fail("n=" + std::to_string(n) + " has a cycle of length " + std::to_string(len));
        detail << (n == 309 ? "" : "; ") << "n=" << n << " " << lengths.size() << " cycles in " << s << " s";
    }
    if (o.pass) o.detail = detail.str();
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"pure pentagon plane cacti", pentagon_counts},
        {"trees from Omega={2}", tree_degeneration},
        {"template and simplified grammars agree", template_equivalence},
        {"engine agrees with census and enumeration", oracle_agreement},
        {"split properties of cycles, cliques and stars", split_properties},
        {"split tree round trips", round_trips},
        {"operator semantics", operator_semantics},
        {"sampler uniformity and determinism", uniformity},
        {"large plane rooted samples", large_samples},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        auto t0 = Clock::now();
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        failed += !o.pass;
        std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " " << criteria[i].first << " ("
                  << o.detail << ") [" << seconds_since(t0) << " s]" << std::endl;
    }
    return failed ? 1 : 0;
}
