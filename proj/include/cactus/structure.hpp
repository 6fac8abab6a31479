#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "cactus/error.hpp"
#include "cactus/grammar.hpp"
#include "cactus/graph.hpp"
#include "cactus/series.hpp"

namespace cactus {

/// A derivation tree over a grammar's constructors. Shapes mirror the
/// grammar AST: a rule reference wraps the rule body, a sum records the
/// chosen alternative, and an operator node lists its components in order
/// (for cycles the stored order is the rotation representative).
struct Structure {
    enum class Kind { Atom, One, Rule, Choice, Product, Operator };

    Kind kind = Kind::Atom;
    int label = 0;             // atoms of labeled structures: 1..n
    std::string name;          // Rule
    std::size_t alternative = 0;  // Choice
    OpKind op = OpKind::Seq;   // Operator
    std::vector<Structure> children;

    static Structure atom(int label = 0) {
        Structure s;
        s.label = label;
        return s;
    }
    static Structure one() {
        Structure s;
        s.kind = Kind::One;
        return s;
    }
    static Structure rule(std::string name, Structure body) {
        Structure s;
        s.kind = Kind::Rule;
        s.name = std::move(name);
        s.children.push_back(std::move(body));
        return s;
    }
    static Structure choice(std::size_t alternative, Structure child) {
        Structure s;
        s.kind = Kind::Choice;
        s.alternative = alternative;
        s.children.push_back(std::move(child));
        return s;
    }
    static Structure product(std::vector<Structure> factors) {
        Structure s;
        s.kind = Kind::Product;
        s.children = std::move(factors);
        return s;
    }
    static Structure operation(OpKind op, std::vector<Structure> components) {
        Structure s;
        s.kind = Kind::Operator;
        s.op = op;
        s.children = std::move(components);
        return s;
    }
};

inline std::size_t size(const Structure& s) {
    if (s.kind == Structure::Kind::Atom) return 1;
    std::size_t total = 0;
    for (const auto& c : s.children) total += size(c);
    return total;
}

namespace detail {

inline std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
    return out;
}

inline std::vector<std::string> min_rotation(const std::vector<std::string>& v) {
    std::vector<std::string> best = v;
    for (std::size_t r = 1; r < v.size(); ++r) {
        std::vector<std::string> rot(v.begin() + static_cast<std::ptrdiff_t>(r), v.end());
        rot.insert(rot.end(), v.begin(), v.begin() + static_cast<std::ptrdiff_t>(r));
        best = std::min(best, rot);
    }
    return best;
}

}  // namespace detail

/// String identifying a structure up to the symmetries of its operators:
/// Set components are unordered, Cyc up to rotation, USeq up to reversal,
/// UCyc up to rotation and reversal.
inline std::string canonical_key(const Structure& s) {
    switch (s.kind) {
        case Structure::Kind::Atom: return s.label ? "z" + std::to_string(s.label) : std::string("z");
        case Structure::Kind::One: return "1";
        case Structure::Kind::Rule: return s.name + "(" + canonical_key(s.children.front()) + ")";
        case Structure::Kind::Choice: return "#" + std::to_string(s.alternative) + ":" + canonical_key(s.children.front());
        case Structure::Kind::Product: {
            std::vector<std::string> parts;
            for (const auto& c : s.children) parts.push_back(canonical_key(c));
            return "(" + detail::join(parts) + ")";
        }
        case Structure::Kind::Operator: {
            std::vector<std::string> parts;
            for (const auto& c : s.children) parts.push_back(canonical_key(c));
            std::vector<std::string> rev(parts.rbegin(), parts.rend());
            switch (s.op) {
                case OpKind::Seq: break;
                case OpKind::Set: std::sort(parts.begin(), parts.end()); break;
                case OpKind::Cyc: parts = detail::min_rotation(parts); break;
                case OpKind::USeq: parts = std::min(parts, rev); break;
                case OpKind::UCyc: parts = std::min(detail::min_rotation(parts), detail::min_rotation(rev)); break;
            }
            return std::string(to_string(s.op)) + "[" + detail::join(parts) + "]";
        }
    }
    return "";
}

// ---------------------------------------------------------------------------
// Random source

/// SplitMix64 generator (Steele, Lea and Flood); one stream per seed.
class RandomSource {
public:
    static constexpr const char* algorithm = "SplitMix64";

    explicit RandomSource(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw Error("empty range");
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t x;
        do x = next();
        while (x >= limit);
        return x % bound;
    }

    /// Uniform big integer in [0, bound) by rejection on the bit length.
    Integer below(const Integer& bound) {
        if (sgn(bound) <= 0) throw Error("empty range");
        const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
        const std::size_t words = (bits + 63) / 64;
        Integer x;
        do {
            x = 0;
            for (std::size_t w = 0; w < words; ++w) {
                x <<= 64;
                std::uint64_t r = next();
                x += Integer(static_cast<unsigned long>(r >> 32)) * Integer(4294967296UL) +
                     Integer(static_cast<unsigned long>(r & 0xffffffffULL));
            }
            const std::size_t excess = words * 64 - bits;
            if (excess) x >>= static_cast<mp_bitcnt_t>(excess);
        } while (x >= bound);
        return x;
    }

    /// Index i with probability weights[i] / sum(weights).
    std::size_t choose(const std::vector<Integer>& weights) {
        Integer total = 0;
        for (const auto& w : weights) total += w;
        Integer r = below(total);
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (r < weights[i]) return i;
            r -= weights[i];
        }
        return weights.size() - 1;
    }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Realization as a graph

/// A cactus built from a structure. Vertices are numbered in depth-first
/// order; labels[v] is the atom label (0 for unlabeled structures).
struct RealizedCactus {
    SimpleGraph graph;
    int root = 0;
    std::vector<int> labels;
};

namespace detail {

class Realizer {
public:
    RealizedCactus run(const Structure& s) {
        plane_ = is_plane(s);
        int root = vertex(s);
        RealizedCactus out;
        out.graph = SimpleGraph(parent_part_.size());
        for (auto [u, v] : edges_) out.graph.add_edge(u, v);
        if (plane_) {
            for (std::size_t v = 0; v < parent_part_.size(); ++v) {
                std::vector<int> r = parent_part_[v];
                r.insert(r.end(), child_part_[v].begin(), child_part_[v].end());
                out.graph.set_rotation(static_cast<int>(v), r);
            }
        }
        out.root = root;
        out.labels = labels_;
        return out;
    }

private:
    static bool is_plane(const Structure& s) {
        if (s.kind == Structure::Kind::Operator && s.op != OpKind::Seq && s.op != OpKind::Cyc) return false;
        return std::all_of(s.children.begin(), s.children.end(), is_plane);
    }

    static const Structure& unwrap(const Structure& s) {
        const Structure* p = &s;
        while (p->kind == Structure::Kind::Rule || p->kind == Structure::Kind::Choice) p = &p->children.front();
        return *p;
    }

    int new_vertex(int label) {
        parent_part_.emplace_back();
        child_part_.emplace_back();
        labels_.push_back(label);
        return static_cast<int>(labels_.size()) - 1;
    }

    /// A vertex: an atom, optionally followed by the operator holding the
    /// polygons that hang from it.
    int vertex(const Structure& s) {
        const Structure& u = unwrap(s);
        if (u.kind == Structure::Kind::Atom) return new_vertex(u.label);
        if (u.kind != Structure::Kind::Product || u.children.empty() ||
            unwrap(u.children.front()).kind != Structure::Kind::Atom)
            throw Error("structure does not describe a rooted cactus");
        int v = new_vertex(unwrap(u.children.front()).label);
        for (std::size_t i = 1; i < u.children.size(); ++i) {
            const Structure& blocks = unwrap(u.children[i]);
            if (blocks.kind != Structure::Kind::Operator) throw Error("structure does not describe a rooted cactus");
            for (const auto& poly : blocks.children) polygon(unwrap(poly), v);
        }
        return v;
    }

    /// A polygon through v whose other vertices are the components, in order.
    void polygon(const Structure& poly, int v) {
        if (poly.kind != Structure::Kind::Operator || poly.children.empty())
            throw Error("structure does not describe a rooted cactus");
        std::vector<int> ws;
        for (const auto& item : poly.children) ws.push_back(vertex(item));
        const std::size_t m = ws.size();
        if (m == 1) {
            edges_.emplace_back(v, ws[0]);
            child_part_[v].push_back(ws[0]);
            parent_part_[ws[0]] = {v};
            return;
        }
        edges_.emplace_back(v, ws[0]);
        for (std::size_t i = 0; i + 1 < m; ++i) edges_.emplace_back(ws[i], ws[i + 1]);
        edges_.emplace_back(ws[m - 1], v);
        child_part_[v].push_back(ws[0]);
        child_part_[v].push_back(ws[m - 1]);
        for (std::size_t i = 0; i < m; ++i) {
            int next = i + 1 < m ? ws[i + 1] : v;
            int prev = i > 0 ? ws[i - 1] : v;
            parent_part_[ws[i]] = {next, prev};
        }
    }

    bool plane_ = false;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> parent_part_;
    std::vector<std::vector<int>> child_part_;
    std::vector<int> labels_;
};

}  // namespace detail

/// Cactus described by a rooted-cactus structure (G_pr or G_fr shapes):
/// atoms become vertices and every polygon component becomes a cycle
/// through its parent vertex (a single component is a bridge). Plane
/// structures also carry the rotation system.
inline RealizedCactus structure_to_graph(const Structure& s) { return detail::Realizer().run(s); }

}  // namespace cactus
