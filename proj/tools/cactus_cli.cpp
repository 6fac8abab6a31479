#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cactus/cactus.hpp"

using namespace cactus;
using json = nlohmann::json;

namespace {

enum Exit { ok = 0, failure = 1, bad_flags = 2, bad_grammar = 3, guard = 4, zero_count = 5, not_cactus = 6, bad_tree = 7 };

struct FamilyFlags {
    std::string embedding = "plane";
    bool rooted = false;
    std::string labeled = "no";
    std::string omega;
    std::string form = "template";
};

void add_family_flags(CLI::App* cmd, FamilyFlags& f) {
    cmd->add_option("--embedding", f.embedding, "plane or free")->check(CLI::IsMember({"plane", "free"}));
    cmd->add_flag("--rooted", f.rooted, "rooted family (default unrooted)");
    cmd->add_option("--labeled", f.labeled, "labeled family: yes or no")
        ->expected(0, 1)
        ->default_str("yes")
        ->check(CLI::IsMember({"yes", "no"}));
    cmd->add_option("--omega", f.omega, "cycle sizes: {5}, {3,5,7} or >=3");
}

OmegaSpec omega_flag(const std::string& text) {
    try {
        OmegaSpec omega = parse_omega(text);
        omega.require_valid();
        return omega;
    } catch (const ValidationError& e) {
        throw CLI::ValidationError("--omega: " + std::string(e.what()));
    }
}

FamilySpec to_spec(const FamilyFlags& f) {
    FamilySpec s;
    s.embedding = f.embedding == "free" ? Embedding::Free : Embedding::Plane;
    s.rooting = f.rooted ? Rooting::Rooted : Rooting::Unrooted;
    s.labeling = f.labeled == "yes" ? Mode::Labeled : Mode::Unlabeled;
    s.omega = omega_flag(f.omega);
    s.form = f.form == "simplified" ? GrammarForm::Simplified : GrammarForm::Template;
    return s;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Writes to --output when given, standard output otherwise.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw Error("cannot write " + path);
        }
    }
    std::ostream& out() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

// ---------------------------------------------------------------------------
// count

struct CountConfig {
    FamilyFlags family;
    std::size_t terms = 20;
    std::string grammar;
    std::string format = "csv";
    std::string output;
};

int run_count(const CountConfig& c) {
    GrammarSystem g;
    std::string family, omega;
    if (!c.grammar.empty()) {
        g = parse_grammar(slurp(c.grammar));
        family = "grammar " + c.grammar;
        omega = g.omega ? g.omega->to_string() : "none";
    } else {
        if (c.family.omega.empty()) throw CLI::ValidationError("--omega is required without --grammar");
        FamilySpec spec = to_spec(c.family);
        g = build_family(spec);
        family = std::string(to_string(spec.embedding)) + " " + to_string(spec.rooting) + " (" + to_string(spec.form) + ")";
        omega = spec.omega.to_string();
    }
    auto seq = counts(evaluate(g, c.terms));
    std::optional<std::size_t> first;
    for (std::size_t n = 0; n < seq.size() && !first; ++n)
        if (sgn(seq[n]) != 0) first = n;
    const std::string indexing = "c_n counts cacti with n vertices, n = 0.." + std::to_string(c.terms) +
                                 "; the single-vertex cactus is not generated (c_1 = 0)";
    const std::string min_size = first ? std::to_string(*first) : "none";

    Sink sink(c.output);
    auto& out = sink.out();
    if (c.format == "json") {
        json j;
        j["family"] = family;
        j["omega"] = omega;
        j["mode"] = to_string(g.mode);
        j["indexing"] = indexing;
        j["min_realizable"] = first ? json(*first) : json(nullptr);
        j["counts"] = json::array();
        for (const auto& v : seq) j["counts"].push_back(v.get_str());
        out << j.dump(2) << "\n";
    } else {
        out << "# family: " << family << "\n# omega: " << omega << "\n# mode: " << to_string(g.mode)
            << "\n# indexing: " << indexing << "\n# min_realizable: " << min_size << "\nn,count\n";
        for (std::size_t n = 0; n < seq.size(); ++n) out << n << "," << seq[n] << "\n";
    }
    return ok;
}

// ---------------------------------------------------------------------------
// sample

struct SampleConfig {
    FamilyFlags family;
    std::size_t size = 0;
    std::uint64_t seed = 1;
    std::string format = "dot";
    std::string output;
};

inline constexpr std::size_t max_sample_size = 5000;

template <class Sampler>
Structure draw(const OmegaSpec& omega, std::size_t n, RandomSource& rng) {
    Sampler sampler(omega, n);
    if (sgn(sampler.counts()[n]) == 0) {
        std::string near;
        for (std::size_t m : Sampler(omega, 2 * n + 16).nearest_realizable(n))
            near += (near.empty() ? "" : ", ") + std::to_string(m);
        throw ZeroCountError("no cactus of size " + std::to_string(n) + " in this family; nearest realizable sizes: " +
                             (near.empty() ? "none" : near));
    }
    return sampler.sample(n, rng);
}

int run_sample(const SampleConfig& c) {
    if (c.family.omega.empty()) throw CLI::ValidationError("--omega is required");
    FamilySpec spec = to_spec(c.family);
    const bool plane = spec.embedding == Embedding::Plane;
    const bool labeled = spec.labeling == Mode::Labeled;
    if (spec.rooting != Rooting::Rooted || plane == labeled)
        throw CLI::ValidationError("samplers exist for plane rooted unlabeled and free rooted labeled cacti only");
    if (c.size > max_sample_size)
        throw ResourceError("sample size is limited to " + std::to_string(max_sample_size));

    RandomSource rng(c.seed);
    Structure s = plane ? draw<PlaneRootedSampler>(spec.omega, c.size, rng)
                        : draw<LabeledFreeRootedSampler>(spec.omega, c.size, rng);
    RealizedCactus r = structure_to_graph(s);
    const std::string family = plane ? "plane rooted unlabeled" : "free rooted labeled";
    const auto lengths = cycle_lengths(r.graph);
    std::vector<std::string> meta{"family: " + family,
                                  "omega: " + spec.omega.to_string(),
                                  "n: " + std::to_string(c.size),
                                  "seed: " + std::to_string(c.seed),
                                  "rng: " + std::string(RandomSource::algorithm),
                                  "root: " + std::to_string(r.root),
                                  "cycles: " + std::to_string(lengths.size())};

    Sink sink(c.output);
    auto& out = sink.out();
    if (c.format == "edgelist") {
        write_edge_list(r.graph, out, meta);
        if (labeled) {
            out << "# labels:";
            for (int l : r.labels) out << " " << l;
            out << "\n";
        }
    } else if (c.format == "json") {
        json j;
        j["family"] = family;
        j["omega"] = spec.omega.to_string();
        j["n"] = c.size;
        j["seed"] = c.seed;
        j["rng"] = RandomSource::algorithm;
        j["root"] = r.root;
        j["edges"] = json::array();
        for (auto [u, v] : r.graph.edges()) j["edges"].push_back({u, v});
        if (labeled) j["labels"] = r.labels;
        j["structure"] = canonical_key(s);
        out << j.dump() << "\n";
    } else {
        write_dot(r.graph, out, meta, r.root, labeled ? r.labels : std::vector<int>{});
    }
    return ok;
}

// ---------------------------------------------------------------------------
// splittree

struct TreeConfig {
    std::string input;
    std::string form = "reduced";
    std::string format;
    std::string output;
};

TreeForm tree_form(const std::string& s) { return s == "simplified" ? TreeForm::Simplified : TreeForm::Reduced; }

SimpleGraph read_graph(const std::string& path) {
    try {
        return parse_edge_list(slurp(path));
    } catch (const NotCactusError&) {
        throw;
    } catch (const Error& e) {
        throw NotCactusError(e.what());
    }
}

int run_decompose(const TreeConfig& c) {
    SimpleGraph g = read_graph(c.input);
    auto check = check_cactus(g);
    if (!check.is_cactus) throw NotCactusError("input graph is not a cactus");
    GraphLabeledTree t = cactus_to_split_tree(g, tree_form(c.form));
    Sink sink(c.output);
    std::vector<std::string> meta{std::string(to_string(tree_form(c.form))) + " split tree of " + c.input};
    if (c.format == "glt") write_glt(t, sink.out(), meta);
    else write_glt_dot(t, sink.out(), meta);
    return ok;
}

int run_compose(const TreeConfig& c) {
    GraphLabeledTree t = parse_glt(slurp(c.input));
    SimpleGraph g = split_tree_to_cactus(t);
    Sink sink(c.output);
    if (c.format == "dot") write_dot(g, sink.out());
    else write_edge_list(g, sink.out());
    return ok;
}

int run_validate(const TreeConfig& c) {
    GraphLabeledTree t = parse_glt(slurp(c.input));
    TreeDiagnostics d = validate_cactus_tree(t, tree_form(c.form));
    Sink sink(c.output);
    auto& out = sink.out();
    out << (d.valid ? "valid " : "invalid ") << to_string(tree_form(c.form)) << " cactus tree\n";
    for (const auto& m : d.messages) out << "  " << m << "\n";
    return d.valid ? ok : bad_tree;
}

int run_accessibility(const TreeConfig& c) {
    GraphLabeledTree t = parse_glt(slurp(c.input));
    SimpleGraph g = accessibility(t);
    Sink sink(c.output);
    if (c.format == "dot") write_dot(g, sink.out());
    else write_edge_list(g, sink.out());
    return ok;
}

// ---------------------------------------------------------------------------
// oracle

struct OracleConfig {
    std::string omega = ">=2";
    std::size_t max_n = 6;
    bool rooted = false;
    FamilyFlags family;
    std::string grammar;
    std::size_t size = 5;
    std::size_t m = 3, q = 2;
    std::string group = "cyclic";
    std::string output;
};

int run_census(const OracleConfig& c) {
    auto r = oracle::census(omega_flag(c.omega), c.max_n);
    Sink sink(c.output);
    auto& out = sink.out();
    out << "# omega: " << r.omega.to_string() << (c.rooted ? " (rooted)" : "") << "\nn,labeled,unlabeled\n";
    for (std::size_t n = 1; n <= r.n_max; ++n)
        out << n << "," << (c.rooted ? r.labeled_rooted[n] : r.labeled[n]) << ","
            << (c.rooted ? r.unlabeled_rooted[n] : r.unlabeled[n]) << "\n";
    return ok;
}

int run_structures(const OracleConfig& c) {
    GrammarSystem g;
    if (!c.grammar.empty()) {
        g = parse_grammar(slurp(c.grammar));
    } else {
        if (c.family.omega.empty()) throw CLI::ValidationError("--omega is required without --grammar");
        FamilySpec spec = to_spec(c.family);
        spec.form = GrammarForm::Simplified;
        g = build_family(spec);
    }
    auto all = oracle::enumerate_structures(g, c.size);
    Sink sink(c.output);
    auto& out = sink.out();
    out << "# " << all.size() << " structures of size " << c.size << "\nindex,structure\n";
    for (std::size_t i = 0; i < all.size(); ++i) out << i << ",\"" << canonical_key(all[i]) << "\"\n";
    return ok;
}

int run_burnside(const OracleConfig& c) {
    auto group = oracle::group_from_string(c.group);
    Sink sink(c.output);
    sink.out() << oracle::burnside_orbits(c.m, c.q, *group) << "\n";
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Counting, sampling and split decomposition of cactus graphs"};
    app.require_subcommand(1);

    CountConfig count;
    auto* count_cmd = app.add_subcommand("count", "print the counting sequence of a family or grammar file");
    add_family_flags(count_cmd, count.family);
    count_cmd->add_option("--form", count.family.form, "template or simplified")
        ->check(CLI::IsMember({"template", "simplified"}));
    count_cmd->add_option("--terms", count.terms, "largest size N");
    count_cmd->add_option("--grammar", count.grammar, "grammar file")->check(CLI::ExistingFile);
    count_cmd->add_option("--format", count.format)->check(CLI::IsMember({"csv", "json"}));
    count_cmd->add_option("-o,--output", count.output);

    SampleConfig sample;
    auto* sample_cmd = app.add_subcommand("sample", "draw a uniform random cactus");
    add_family_flags(sample_cmd, sample.family);
    sample_cmd->add_option("--size", sample.size, "number of vertices")->required();
    sample_cmd->add_option("--seed", sample.seed);
    sample_cmd->add_option("--format", sample.format)->check(CLI::IsMember({"dot", "edgelist", "json"}));
    sample_cmd->add_option("-o,--output", sample.output);

    TreeConfig tree;
    auto* tree_cmd = app.add_subcommand("splittree", "split decomposition trees of cacti");
    tree_cmd->require_subcommand(1);
    auto add_tree = [&](const char* name, const char* help, std::vector<std::string> formats) {
        auto* cmd = tree_cmd->add_subcommand(name, help);
        cmd->add_option("input", tree.input)->required()->check(CLI::ExistingFile);
        cmd->add_option("--form", tree.form)->check(CLI::IsMember({"reduced", "simplified"}));
        cmd->add_option("--format", tree.format)->check(CLI::IsMember(formats));
        cmd->add_option("-o,--output", tree.output);
        return cmd;
    };
    auto* decompose_cmd = add_tree("decompose", "edge list to split tree", {"dot", "glt"});
    auto* compose_cmd = add_tree("compose", "split tree to cactus", {"edgelist", "dot"});
    auto* validate_cmd = add_tree("validate", "check a split tree against the cactus conditions", {"text"});
    auto* access_cmd = add_tree("accessibility", "accessibility graph of a split tree", {"edgelist", "dot"});

    OracleConfig orc;
    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force reference computations");
    oracle_cmd->require_subcommand(1);
    auto* census_cmd = oracle_cmd->add_subcommand("census", "exhaustive census of small cacti");
    census_cmd->add_option("--omega", orc.omega);
    census_cmd->add_option("--max-n", orc.max_n);
    census_cmd->add_flag("--rooted", orc.rooted);
    census_cmd->add_option("-o,--output", orc.output);
    auto* structures_cmd = oracle_cmd->add_subcommand("structures", "list every structure of one size");
    add_family_flags(structures_cmd, orc.family);
    structures_cmd->add_option("--grammar", orc.grammar)->check(CLI::ExistingFile);
    structures_cmd->add_option("--size", orc.size);
    structures_cmd->add_option("-o,--output", orc.output);
    auto* burnside_cmd = oracle_cmd->add_subcommand("burnside", "orbits of words under a position group");
    burnside_cmd->add_option("--m", orc.m);
    burnside_cmd->add_option("--q", orc.q);
    burnside_cmd->add_option("--group", orc.group)
        ->check(CLI::IsMember({"trivial", "cyclic", "reversal", "dihedral", "symmetric"}));
    burnside_cmd->add_option("-o,--output", orc.output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return bad_flags;
    }

    try {
        if (*count_cmd) return run_count(count);
        if (*sample_cmd) return run_sample(sample);
        if (*decompose_cmd) return run_decompose(tree);
        if (*compose_cmd) return run_compose(tree);
        if (*validate_cmd) return run_validate(tree);
        if (*access_cmd) return run_accessibility(tree);
        if (*census_cmd) return run_census(orc);
        if (*structures_cmd) return run_structures(orc);
        if (*burnside_cmd) return run_burnside(orc);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return bad_flags;
    } catch (const GrammarSyntaxError& e) {
        std::cerr << "grammar error: " << e.what() << "\n";
        return bad_grammar;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return bad_grammar;
    } catch (const IllFoundedError& e) {
        std::cerr << "grammar error: " << e.what() << "\n";
        return bad_grammar;
    } catch (const SemanticsError& e) {
        std::cerr << "grammar error: " << e.what() << "\n";
        return bad_grammar;
    } catch (const ResourceError& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return guard;
    } catch (const ZeroCountError& e) {
        std::cerr << "zero count: " << e.what() << "\n";
        return zero_count;
    } catch (const NotCactusError& e) {
        std::cerr << "not a cactus: " << e.what() << "\n";
        return not_cactus;
    } catch (const InvalidTreeError& e) {
        std::cerr << "invalid tree: " << e.what() << "\n";
        return bad_tree;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return failure;
    }
    return failure;
}
