#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cactus/error.hpp"

namespace cactus {

using Edge = std::pair<int, int>;

/// Finite simple graph on vertices 0..n-1 with an optional rotation system.
class SimpleGraph {
public:
    explicit SimpleGraph(std::size_t n = 0) : adj_(n) {}

    std::size_t vertex_count() const { return adj_.size(); }
    std::size_t edge_count() const { return edges_; }

    int add_vertex() {
        adj_.emplace_back();
        if (!rotation_.empty()) rotation_.emplace_back();
        return static_cast<int>(adj_.size()) - 1;
    }

    void add_edge(int u, int v) {
        check_vertex(u);
        check_vertex(v);
        if (u == v) throw Error("self-loop at vertex " + std::to_string(u));
        if (has_edge(u, v)) throw Error("duplicate edge " + std::to_string(u) + "-" + std::to_string(v));
        insert_sorted(adj_[u], v);
        insert_sorted(adj_[v], u);
        ++edges_;
    }

    bool has_edge(int u, int v) const {
        if (u < 0 || v < 0 || u >= static_cast<int>(adj_.size()) || v >= static_cast<int>(adj_.size())) return false;
        return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
    }

    /// Sorted neighbour list.
    const std::vector<int>& neighbors(int v) const { return adj_.at(v); }
    std::size_t degree(int v) const { return adj_.at(v).size(); }

    /// All edges as (u, v) with u < v, lexicographically sorted.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        for (int u = 0; u < static_cast<int>(adj_.size()); ++u)
            for (int v : adj_[u])
                if (u < v) out.emplace_back(u, v);
        return out;
    }

    bool has_rotation() const { return !rotation_.empty(); }

    /// Cyclic order of the neighbours of v (only with a rotation system).
    const std::vector<int>& rotation(int v) const { return rotation_.at(v); }

    /// Sets the cyclic neighbour order at v; it must list N(v) exactly once.
    void set_rotation(int v, std::vector<int> order) {
        check_vertex(v);
        std::vector<int> sorted = order;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != adj_[v]) throw Error("rotation at vertex " + std::to_string(v) + " does not list its neighbours");
        if (rotation_.empty()) rotation_.resize(adj_.size());
        rotation_[v] = std::move(order);
    }

    /// True when every vertex has a rotation listing all its neighbours.
    bool rotation_complete() const {
        if (rotation_.empty()) return false;
        for (std::size_t v = 0; v < adj_.size(); ++v)
            if (rotation_[v].size() != adj_[v].size()) return false;
        return true;
    }

    void clear_rotation() { rotation_.clear(); }

    /// Same vertex count and edge set (rotations are not compared).
    friend bool operator==(const SimpleGraph& a, const SimpleGraph& b) { return a.adj_ == b.adj_; }

private:
    void check_vertex(int v) const {
        if (v < 0 || v >= static_cast<int>(adj_.size())) throw Error("vertex " + std::to_string(v) + " out of range");
    }

    static void insert_sorted(std::vector<int>& list, int v) { list.insert(std::upper_bound(list.begin(), list.end(), v), v); }

    std::vector<std::vector<int>> adj_;
    std::vector<std::vector<int>> rotation_;
    std::size_t edges_ = 0;
};

/// Two rotations agree when they are equal up to a cyclic shift at every vertex.
inline bool same_rotation(const SimpleGraph& a, const SimpleGraph& b) {
    if (!a.has_rotation() || !b.has_rotation() || a.vertex_count() != b.vertex_count()) return false;
    for (int v = 0; v < static_cast<int>(a.vertex_count()); ++v) {
        const auto& ra = a.rotation(v);
        const auto& rb = b.rotation(v);
        if (ra.size() != rb.size()) return false;
        if (ra.empty()) continue;
        auto it = std::find(rb.begin(), rb.end(), ra.front());
        if (it == rb.end()) return false;
        std::vector<int> shifted(it, rb.end());
        shifted.insert(shifted.end(), rb.begin(), it);
        if (shifted != ra) return false;
    }
    return true;
}

inline bool is_connected(const SimpleGraph& g) {
    const std::size_t n = g.vertex_count();
    if (n == 0) return false;
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : g.neighbors(v)) {
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count == n;
}

inline SimpleGraph complete_graph(std::size_t k) {
    SimpleGraph g(k);
    for (int u = 0; u < static_cast<int>(k); ++u)
        for (int v = u + 1; v < static_cast<int>(k); ++v) g.add_edge(u, v);
    return g;
}

/// S_k: vertex 0 is the centre, joined to k-1 extremities.
inline SimpleGraph star_graph(std::size_t k) {
    SimpleGraph g(k);
    for (int v = 1; v < static_cast<int>(k); ++v) g.add_edge(0, v);
    return g;
}

inline SimpleGraph cycle_graph(std::size_t m) {
    SimpleGraph g(m);
    for (int v = 0; v < static_cast<int>(m); ++v) g.add_edge(v, (v + 1) % static_cast<int>(m));
    return g;
}

inline SimpleGraph path_graph(std::size_t m) {
    SimpleGraph g(m);
    for (int v = 0; v + 1 < static_cast<int>(m); ++v) g.add_edge(v, v + 1);
    return g;
}

inline bool is_clique(const SimpleGraph& g) {
    const std::size_t n = g.vertex_count();
    return n == 0 || g.edge_count() == n * (n - 1) / 2;
}

/// Centre of a star graph with at least 3 vertices, if g is one.
inline std::optional<int> star_center(const SimpleGraph& g) {
    const std::size_t n = g.vertex_count();
    if (n < 3 || g.edge_count() != n - 1) return std::nullopt;
    for (int v = 0; v < static_cast<int>(n); ++v)
        if (g.degree(v) == n - 1) return v;
    return std::nullopt;
}

inline bool is_degenerate(const SimpleGraph& g) { return is_clique(g) || star_center(g).has_value(); }

// ---------------------------------------------------------------------------
// Blocks

struct Block {
    std::vector<int> vertices;  // a cycle block lists its vertices in cyclic order
    std::vector<Edge> edges;
    bool is_cycle = false;
    bool external = false;  // shares exactly one vertex with the other blocks
};

struct Cluster {
    int vertex = -1;                  // the shared cut vertex
    std::vector<std::size_t> blocks;  // indices into BlockDecomposition::blocks
};

struct BlockDecomposition {
    std::vector<Block> blocks;
    std::vector<Cluster> clusters;
    std::vector<std::vector<std::size_t>> blocks_at;  // blocks containing each vertex
};

/// Biconnected components (iterative Tarjan), each given as an edge list.
inline std::vector<std::vector<Edge>> biconnected_components(const SimpleGraph& g) {
    const int n = static_cast<int>(g.vertex_count());
    std::vector<int> disc(n, -1), low(n, 0);
    std::vector<std::vector<Edge>> out;
    std::vector<Edge> edge_stack;
    int timer = 0;
    for (int s = 0; s < n; ++s) {
        if (disc[s] != -1) continue;
        struct Frame {
            int v, parent;
            std::size_t next;
        };
        std::vector<Frame> stack{{s, -1, 0}};
        disc[s] = low[s] = timer++;
        while (!stack.empty()) {
            Frame& f = stack.back();
            const auto& nbrs = g.neighbors(f.v);
            if (f.next < nbrs.size()) {
                int w = nbrs[f.next++];
                if (disc[w] == -1) {
                    edge_stack.emplace_back(f.v, w);
                    disc[w] = low[w] = timer++;
                    stack.push_back({w, f.v, 0});
                } else if (w != f.parent && disc[w] < disc[f.v]) {
                    edge_stack.emplace_back(f.v, w);
                    low[f.v] = std::min(low[f.v], disc[w]);
                }
                continue;
            }
            int v = f.v, parent = f.parent;
            stack.pop_back();
            if (parent == -1) continue;
            low[parent] = std::min(low[parent], low[v]);
            if (low[v] >= disc[parent]) {
                std::vector<Edge> comp;
                while (true) {
                    Edge e = edge_stack.back();
                    edge_stack.pop_back();
                    comp.push_back(e);
                    if (e == Edge(parent, v)) break;
                }
                out.push_back(std::move(comp));
            }
        }
    }
    return out;
}

struct CactusCheck {
    bool is_cactus = false;
    std::vector<Edge> offending_block;  // certificate when the check fails
};

/// Connected graph whose blocks are all single edges or cycles.
inline CactusCheck check_cactus(const SimpleGraph& g) {
    if (!is_connected(g)) throw NotCactusError("graph is not connected");
    for (auto& comp : biconnected_components(g)) {
        std::set<int> verts;
        for (auto [u, v] : comp) {
            verts.insert(u);
            verts.insert(v);
        }
        if (comp.size() != 1 && comp.size() != verts.size()) return {false, comp};
    }
    return {true, {}};
}

inline bool is_cactus(const SimpleGraph& g) { return check_cactus(g).is_cactus; }

namespace detail {

/// Walks a cycle block into cyclic order starting at its smallest vertex.
inline std::vector<int> cycle_order(const std::vector<Edge>& edges) {
    std::map<int, std::vector<int>> adj;
    for (auto [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    int start = adj.begin()->first;
    auto& first = adj[start];
    int prev = start, cur = std::min(first[0], first[1]);
    std::vector<int> order{start};
    while (cur != start) {
        order.push_back(cur);
        const auto& nb = adj[cur];
        int next = nb[0] == prev ? nb[1] : nb[0];
        prev = cur;
        cur = next;
    }
    return order;
}

}  // namespace detail

inline BlockDecomposition blocks_and_clusters(const SimpleGraph& g) {
    auto check = check_cactus(g);
    if (!check.is_cactus) throw NotCactusError("graph is not a cactus");
    BlockDecomposition out;
    out.blocks_at.resize(g.vertex_count());
    for (auto& comp : biconnected_components(g)) {
        Block b;
        for (auto& e : comp)
            if (e.first > e.second) std::swap(e.first, e.second);
        std::sort(comp.begin(), comp.end());
        b.edges = comp;
        if (comp.size() == 1) {
            b.vertices = {comp[0].first, comp[0].second};
        } else {
            b.is_cycle = true;
            b.vertices = detail::cycle_order(comp);
        }
        out.blocks.push_back(std::move(b));
    }
    std::sort(out.blocks.begin(), out.blocks.end(), [](const Block& a, const Block& b) {
        return *std::min_element(a.vertices.begin(), a.vertices.end()) <
                   *std::min_element(b.vertices.begin(), b.vertices.end()) ||
               (*std::min_element(a.vertices.begin(), a.vertices.end()) ==
                    *std::min_element(b.vertices.begin(), b.vertices.end()) &&
                a.edges < b.edges);
    });
    for (std::size_t i = 0; i < out.blocks.size(); ++i)
        for (int v : out.blocks[i].vertices) out.blocks_at[v].push_back(i);
    for (int v = 0; v < static_cast<int>(g.vertex_count()); ++v)
        if (out.blocks_at[v].size() >= 2) out.clusters.push_back({v, out.blocks_at[v]});
    for (auto& b : out.blocks) {
        std::size_t shared = 0;
        for (int v : b.vertices)
            if (out.blocks_at[v].size() >= 2) ++shared;
        b.external = shared == 1;
    }
    return out;
}

/// Lengths of all cycle blocks of a cactus.
inline std::vector<std::size_t> cycle_lengths(const SimpleGraph& g) {
    std::vector<std::size_t> out;
    for (const auto& b : blocks_and_clusters(g).blocks)
        if (b.is_cycle) out.push_back(b.vertices.size());
    return out;
}

// ---------------------------------------------------------------------------
// Splits

struct Bipartition {
    std::vector<int> first;  // contains the smallest vertex
    std::vector<int> second;
};

/// Every split of g by exhaustive search over vertex bipartitions.
inline std::vector<Bipartition> find_splits(const SimpleGraph& g) {
    const std::size_t n = g.vertex_count();
    if (n > 20) throw ResourceError("find_splits is limited to 20 vertices (got " + std::to_string(n) + ")");
    if (!is_connected(g)) throw Error("find_splits requires a connected graph");
    std::vector<std::uint32_t> adj(n, 0);
    for (auto [u, v] : g.edges()) {
        adj[u] |= 1U << v;
        adj[v] |= 1U << u;
    }
    std::vector<Bipartition> out;
    if (n < 4) return out;
    const std::uint32_t all = (1U << n) - 1;
    for (std::uint32_t rest = 0; rest < (1U << (n - 1)); ++rest) {
        std::uint32_t side = (rest << 1) | 1U;
        std::uint32_t other = all & ~side;
        if (__builtin_popcount(side) < 2 || __builtin_popcount(other) < 2) continue;
        std::uint32_t frontier_a = 0, frontier_b = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if ((side >> v) & 1U) {
                if (adj[v] & other) frontier_a |= 1U << v;
            } else if (adj[v] & side) {
                frontier_b |= 1U << v;
            }
        }
        bool split = true;
        for (std::size_t v = 0; v < n && split; ++v)
            if (((frontier_a >> v) & 1U) && (adj[v] & frontier_b) != frontier_b) split = false;
        if (!split) continue;
        Bipartition b;
        for (std::size_t v = 0; v < n; ++v) ((side >> v) & 1U ? b.first : b.second).push_back(static_cast<int>(v));
        out.push_back(std::move(b));
    }
    return out;
}

inline bool is_prime(const SimpleGraph& g) { return g.vertex_count() >= 4 && find_splits(g).empty(); }

// ---------------------------------------------------------------------------
// Text formats

/// Edge-list format: `n m` header, m lines `u v`, optional `rot v: a b c`
/// lines giving the cyclic neighbour order; `#` starts a comment.
inline SimpleGraph parse_edge_list(std::istream& in) {
    std::string line;
    std::optional<SimpleGraph> g;
    std::size_t expected_edges = 0, seen_edges = 0, line_no = 0;
    auto fail = [&](const std::string& what) {
        throw Error("edge list line " + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (!g) {
            long n = 0;
            long m = 0;
            try {
                n = std::stol(first);
            } catch (const std::exception&) {
                fail("expected header 'n m'");
            }
            if (!(ls >> m) || n < 0 || m < 0) fail("expected header 'n m'");
            g.emplace(static_cast<std::size_t>(n));
            expected_edges = static_cast<std::size_t>(m);
            continue;
        }
        if (first == "rot") {
            std::string vtok;
            if (!(ls >> vtok) || vtok.back() != ':') fail("expected 'rot v: ...'");
            int v = std::stoi(vtok.substr(0, vtok.size() - 1));
            std::vector<int> order;
            int w;
            while (ls >> w) order.push_back(w);
            try {
                g->set_rotation(v, order);
            } catch (const Error& e) {
                fail(e.what());
            }
            continue;
        }
        int u = 0, v = 0;
        try {
            u = std::stoi(first);
        } catch (const std::exception&) {
            fail("expected an edge 'u v'");
        }
        if (!(ls >> v)) fail("expected an edge 'u v'");
        try {
            g->add_edge(u, v);
        } catch (const Error& e) {
            fail(e.what());
        }
        ++seen_edges;
    }
    if (!g) throw Error("edge list is empty");
    if (seen_edges != expected_edges)
        throw Error("edge list declares " + std::to_string(expected_edges) + " edges but lists " +
                    std::to_string(seen_edges));
    if (g->has_rotation() && !g->rotation_complete()) throw Error("rotation system does not cover every vertex");
    return *g;
}

inline SimpleGraph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    return parse_edge_list(in);
}

inline void write_edge_list(const SimpleGraph& g, std::ostream& out, const std::vector<std::string>& comments = {}) {
    for (const auto& c : comments) out << "# " << c << "\n";
    out << g.vertex_count() << " " << g.edge_count() << "\n";
    for (auto [u, v] : g.edges()) out << u << " " << v << "\n";
    if (g.has_rotation()) {
        for (int v = 0; v < static_cast<int>(g.vertex_count()); ++v) {
            out << "rot " << v << ":";
            for (int w : g.rotation(v)) out << " " << w;
            out << "\n";
        }
    }
}

inline std::string to_edge_list(const SimpleGraph& g, const std::vector<std::string>& comments = {}) {
    std::ostringstream out;
    write_edge_list(g, out, comments);
    return out.str();
}

/// DOT export. `labels` (optional) renames vertices; `root` is drawn boxed.
inline void write_dot(const SimpleGraph& g, std::ostream& out, const std::vector<std::string>& comments = {},
                      std::optional<int> root = std::nullopt, const std::vector<int>& labels = {}) {
    for (const auto& c : comments) out << "// " << c << "\n";
    out << "graph cactus {\n  node [shape=circle, width=0.2, fixedsize=false];\n";
    for (int v = 0; v < static_cast<int>(g.vertex_count()); ++v) {
        out << "  " << v << " [label=\"" << (labels.empty() ? v : labels[v]) << "\"";
        if (root && *root == v) out << ", shape=box, style=filled, fillcolor=lightblue";
        out << "];\n";
    }
    for (auto [u, v] : g.edges()) out << "  " << u << " -- " << v << ";\n";
    out << "}\n";
}

}  // namespace cactus
