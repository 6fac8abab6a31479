#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cactus/counting.hpp"
#include "cactus/grammar.hpp"
#include "cactus/omega.hpp"

namespace cactus {

enum class Embedding { Plane, Free };
enum class Rooting { Rooted, Unrooted };
enum class GrammarForm { Template, Simplified };

inline const char* to_string(Embedding e) { return e == Embedding::Plane ? "plane" : "free"; }
inline const char* to_string(Rooting r) { return r == Rooting::Rooted ? "rooted" : "unrooted"; }
inline const char* to_string(GrammarForm f) { return f == GrammarForm::Template ? "template" : "simplified"; }

struct FamilySpec {
    Embedding embedding = Embedding::Plane;
    Rooting rooting = Rooting::Rooted;
    Mode labeling = Mode::Unlabeled;
    OmegaSpec omega = OmegaSpec::at_least(2);
    GrammarForm form = GrammarForm::Template;

    std::string describe() const {
        return std::string(to_string(embedding)) + " " + to_string(rooting) + " " + cactus::to_string(labeling) +
               " cacti, Omega=" + omega.to_string() + ", " + to_string(form) + " grammar";
    }
};

namespace detail {

inline std::string header(const FamilySpec& spec, const std::string& root) {
    return "@mode " + std::string(to_string(spec.labeling)) + ";\n@omega " + spec.omega.to_string() + ";\n@root " +
           root + ";\n";
}

}  // namespace detail

/// Source of the general template grammar. Operators follow the
/// plane/free guidelines: X,Y,Z,W = Cyc,Seq,Seq,Cyc or Set,Set,USeq,UCyc.
inline std::string template_source(const FamilySpec& spec) {
    const bool plane = spec.embedding == Embedding::Plane;
    const std::string X = plane ? "Cyc" : "Set";
    const std::string Y = plane ? "Seq" : "Set";
    const std::string Zop = plane ? "Seq" : "USeq";
    const std::string W = plane ? "Cyc" : "UCyc";
    const bool rooted = spec.rooting == Rooting::Rooted;

    std::string s = detail::header(spec, rooted ? "G" : "T_S + T_P - T_SP");
    s += "S_C = " + X + "(>=2; P);\n";
    s += "S_X = Z * " + Y + "(>=1; P);\n";
    s += "P = " + Zop + "(in Omega-1; Z + S_X);\n";
    if (rooted) {
        s += "G = Z * (P + S_C);\n";
    } else {
        s += "T_S = Z * S_C;\n";
        s += "T_P = " + W + "(in Omega; Z + S_X);\n";
        s += "T_SP = P * S_X;\n";
    }
    return s;
}

/// Source of the compact grammars G_fr, G_pr, G_fu and G_pu.
inline std::string simplified_source(const FamilySpec& spec) {
    const bool plane = spec.embedding == Embedding::Plane;
    const bool rooted = spec.rooting == Rooting::Rooted;
    if (!plane && rooted)
        return detail::header(spec, "G") + "G = Z * Set(>=1; USeq(in Omega-1; Z + G));\n";
    if (plane && rooted)
        return detail::header(spec, "G") +
               "G = Z * Cyc(>=1; Seq(in Omega-1; Q));\n"
               "Q = Z * Seq(>=0; Seq(in Omega-1; Q));\n";
    if (!plane)
        return detail::header(spec, "T_P - T_SP + Q - Z") +
               "Q = Z * Set(>=0; USeq(in Omega-1; Q));\n"
               "T_P = UCyc(in Omega; Q);\n"
               "T_SP = Q * USeq(in Omega-1; Q);\n";
    return detail::header(spec, "T_P + T_S - T_SP + T_Z") +
           "Q = Z * Seq(>=0; Seq(in Omega-1; Q));\n"
           "P = Seq(in Omega-1; Q);\n"
           "T_P = Cyc(in Omega; Q);\n"
           "T_S = Z * Cyc(>=2; P);\n"
           "T_SP = Q * P;\n"
           "T_Z = Z * P;\n";
}

inline GrammarSystem build_template(const FamilySpec& spec) {
    spec.omega.require_valid();
    GrammarSystem g = parse_grammar(template_source(spec));
    require_valid(g);
    return g;
}

inline GrammarSystem build_simplified(const FamilySpec& spec) {
    spec.omega.require_valid();
    GrammarSystem g = parse_grammar(simplified_source(spec));
    require_valid(g);
    return g;
}

inline GrammarSystem build_family(const FamilySpec& spec) {
    return spec.form == GrammarForm::Template ? build_template(spec) : build_simplified(spec);
}

/// Raw grammar counts plus the size conventions needed to present them.
/// The grammars never generate the single-vertex cactus, so c_1 is 0 even
/// though that graph belongs to every family.
struct FamilyCounts {
    std::vector<Integer> counts;
    std::optional<std::size_t> first_nonzero;  // smallest n with c_n > 0
    bool omits_single_vertex = true;
};

inline FamilyCounts family_counts(const FamilySpec& spec, std::size_t order) {
    FamilyCounts out;
    out.counts = counts(evaluate(build_family(spec), order));
    for (std::size_t n = 0; n < out.counts.size(); ++n) {
        if (sgn(out.counts[n]) != 0) {
            out.first_nonzero = n;
            break;
        }
    }
    return out;
}

}  // namespace cactus
