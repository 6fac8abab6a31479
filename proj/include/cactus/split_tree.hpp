#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
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
#include "cactus/graph.hpp"

namespace cactus {

enum class LabelKind { Clique, Star, Cycle, Explicit };

/// Label graph of an internal node; its vertices are markers 0..size-1.
/// A star's centre is marker 0. A cycle lists its markers in cyclic
/// order; a cycle of size 2 is a 2-gon (a single edge between two markers).
struct NodeLabel {
    LabelKind kind = LabelKind::Clique;
    std::size_t size = 0;
    std::vector<Edge> edges;  // explicit labels only

    static NodeLabel clique(std::size_t k) { return {LabelKind::Clique, k, {}}; }
    static NodeLabel star(std::size_t k) { return {LabelKind::Star, k, {}}; }
    static NodeLabel cycle(std::size_t k) { return {LabelKind::Cycle, k, {}}; }
    static NodeLabel explicit_graph(std::size_t k, std::vector<Edge> edges) {
        for (auto& e : edges)
            if (e.first > e.second) std::swap(e.first, e.second);
        std::sort(edges.begin(), edges.end());
        return {LabelKind::Explicit, k, std::move(edges)};
    }

    bool adjacent(std::size_t i, std::size_t j) const {
        if (i == j || i >= size || j >= size) return false;
        switch (kind) {
            case LabelKind::Clique: return true;
            case LabelKind::Star: return i == 0 || j == 0;
            case LabelKind::Cycle: return size == 2 || (i + 1) % size == j || (j + 1) % size == i;
            case LabelKind::Explicit: {
                Edge e{static_cast<int>(std::min(i, j)), static_cast<int>(std::max(i, j))};
                return std::binary_search(edges.begin(), edges.end(), e);
            }
        }
        return false;
    }

    /// Cycles of size at least 3; a triangle clique is the same graph as C3.
    bool is_polygon() const { return (kind == LabelKind::Cycle && size >= 3) || (kind == LabelKind::Clique && size == 3); }
    bool is_two_gon() const { return kind == LabelKind::Cycle && size == 2; }
    bool is_clique_like() const { return kind == LabelKind::Clique || (kind == LabelKind::Cycle && size == 3); }

    SimpleGraph graph() const {
        SimpleGraph g(size);
        for (std::size_t i = 0; i < size; ++i)
            for (std::size_t j = i + 1; j < size; ++j)
                if (adjacent(i, j)) g.add_edge(static_cast<int>(i), static_cast<int>(j));
        return g;
    }

    std::string describe() const {
        switch (kind) {
            case LabelKind::Clique: return "clique K" + std::to_string(size);
            case LabelKind::Star: return "star S" + std::to_string(size);
            case LabelKind::Cycle: return size == 2 ? std::string("2-gon") : "cycle C" + std::to_string(size);
            case LabelKind::Explicit: return "graph on " + std::to_string(size) + " markers";
        }
        return "";
    }

    friend bool operator==(const NodeLabel&, const NodeLabel&) = default;
};

/// One end of a tree edge: marker `marker` of node `node` (leaves use marker 0).
struct Port {
    std::size_t node = 0;
    std::size_t marker = 0;

    friend bool operator==(const Port&, const Port&) = default;
    friend auto operator<=>(const Port&, const Port&) = default;
};

struct TreeNode {
    bool leaf = false;
    int vertex = -1;  // leaves only
    NodeLabel label;
    std::vector<std::optional<Port>> links;  // links[m] is the tree edge at marker m
};

/// Graph-labeled tree. Each tree edge joins two ports; the marker index of
/// a port is the label vertex that the tree edge corresponds to.
class GraphLabeledTree {
public:
    std::size_t add_leaf(int vertex) {
        TreeNode n;
        n.leaf = true;
        n.vertex = vertex;
        n.links.resize(1);
        nodes_.push_back(std::move(n));
        return nodes_.size() - 1;
    }

    std::size_t add_node(NodeLabel label) {
        TreeNode n;
        n.links.resize(label.size);
        n.label = std::move(label);
        nodes_.push_back(std::move(n));
        return nodes_.size() - 1;
    }

    void link(Port a, Port b) {
        check_port(a);
        check_port(b);
        if (a.node == b.node) throw InvalidTreeError("cannot link a node to itself");
        if (nodes_[a.node].links[a.marker] || nodes_[b.node].links[b.marker])
            throw InvalidTreeError("port already linked");
        nodes_[a.node].links[a.marker] = b;
        nodes_[b.node].links[b.marker] = a;
    }

    std::size_t size() const { return nodes_.size(); }
    const TreeNode& node(std::size_t i) const { return nodes_.at(i); }
    const std::vector<TreeNode>& nodes() const { return nodes_; }

    /// The port at the far end of the tree edge at p.
    Port across(Port p) const {
        check_port(p);
        const auto& l = nodes_[p.node].links[p.marker];
        if (!l) throw InvalidTreeError("node " + std::to_string(p.node) + " marker " + std::to_string(p.marker) + " is not linked");
        return *l;
    }

    std::size_t leaf_count() const {
        return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.leaf; }));
    }

    std::optional<std::size_t> leaf_of(int vertex) const {
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (nodes_[i].leaf && nodes_[i].vertex == vertex) return i;
        return std::nullopt;
    }

    /// Malformations that make the tree unusable; empty when well formed.
    std::vector<std::string> structural_problems() const {
        std::vector<std::string> out;
        if (nodes_.empty()) return {"tree has no nodes"};
        std::size_t edges = 0;
        std::set<int> vertices;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const auto& n = nodes_[i];
            const std::string who = "node " + std::to_string(i);
            if (n.leaf) {
                if (n.vertex < 0) out.push_back(who + ": leaf has a negative vertex id");
                if (!vertices.insert(n.vertex).second) out.push_back(who + ": duplicate leaf vertex " + std::to_string(n.vertex));
            } else {
                if (n.label.size < 2) out.push_back(who + ": label has fewer than two markers");
                if (n.label.kind == LabelKind::Star && n.label.size < 3) out.push_back(who + ": star needs at least two extremities");
                for (auto [u, v] : n.label.edges)
                    if (u < 0 || v < 0 || u >= static_cast<int>(n.label.size) || v >= static_cast<int>(n.label.size) || u == v)
                        out.push_back(who + ": label edge out of range");
            }
            for (std::size_t m = 0; m < n.links.size(); ++m) {
                const auto& l = n.links[m];
                if (!l) {
                    out.push_back(who + " marker " + std::to_string(m) + ": no tree edge");
                    continue;
                }
                if (l->node >= nodes_.size() || l->marker >= nodes_[l->node].links.size() ||
                    nodes_[l->node].links[l->marker] != Port{i, m}) {
                    out.push_back(who + " marker " + std::to_string(m) + ": tree edge is not symmetric");
                    continue;
                }
                ++edges;
            }
        }
        if (!out.empty()) return out;
        edges /= 2;
        if (edges + 1 != nodes_.size()) out.push_back("underlying graph is not a tree (" + std::to_string(edges) + " edges, " + std::to_string(nodes_.size()) + " nodes)");
        std::vector<char> seen(nodes_.size(), 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            std::size_t i = stack.back();
            stack.pop_back();
            for (const auto& l : nodes_[i].links)
                if (!seen[l->node]) {
                    seen[l->node] = 1;
                    ++reached;
                    stack.push_back(l->node);
                }
        }
        if (reached != nodes_.size()) out.push_back("underlying tree is not connected");
        int expected = 0;
        for (int v : vertices)
            if (v != expected++) {
                out.push_back("leaf vertices are not numbered 0.." + std::to_string(vertices.size() - 1));
                break;
            }
        return out;
    }

    void require_structure() const {
        auto p = structural_problems();
        if (!p.empty()) throw InvalidTreeError("malformed graph-labeled tree: " + p.front());
    }

private:
    void check_port(Port p) const {
        if (p.node >= nodes_.size() || p.marker >= nodes_[p.node].links.size())
            throw InvalidTreeError("port (" + std::to_string(p.node) + ", " + std::to_string(p.marker) + ") does not exist");
    }

    std::vector<TreeNode> nodes_;
};

/// Graph on the leaves: two leaves are adjacent when an alternated path joins them.
inline SimpleGraph accessibility(const GraphLabeledTree& t) {
    t.require_structure();
    SimpleGraph g(t.leaf_count());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& start = t.node(i);
        if (!start.leaf) continue;
        std::vector<Port> stack{t.across({i, 0})};
        while (!stack.empty()) {
            Port p = stack.back();
            stack.pop_back();
            const auto& n = t.node(p.node);
            if (n.leaf) {
                if (start.vertex < n.vertex) g.add_edge(start.vertex, n.vertex);
                continue;
            }
            for (std::size_t q = 0; q < n.links.size(); ++q)
                if (n.label.adjacent(p.marker, q)) stack.push_back(t.across({p.node, q}));
        }
    }
    return g;
}

enum class TreeForm { Reduced, Simplified };

inline const char* to_string(TreeForm f) { return f == TreeForm::Reduced ? "reduced" : "simplified"; }

namespace detail {

inline bool is_star(const GraphLabeledTree& t, std::size_t i) {
    return !t.node(i).leaf && t.node(i).label.kind == LabelKind::Star;
}

/// The other star of a centre-to-centre pair, if node i is in one.
inline std::optional<std::size_t> paired_star(const GraphLabeledTree& t, std::size_t i) {
    if (!is_star(t, i)) return std::nullopt;
    Port c = t.across({i, 0});
    if (is_star(t, c.node) && c.marker == 0) return c.node;
    return std::nullopt;
}

inline bool is_extremity(const GraphLabeledTree& t, Port p) { return is_star(t, p.node) && p.marker != 0; }

/// Graph vertex represented by whatever lies beyond port p: a leaf, or the
/// cut vertex of a star entered at an extremity (possibly through a 2-gon).
inline int vertex_behind(const GraphLabeledTree& t, Port p) {
    Port r = t.across(p);
    const auto& n = t.node(r.node);
    if (n.leaf) return n.vertex;
    if (n.label.is_two_gon()) return vertex_behind(t, {r.node, 1 - r.marker});
    if (n.label.kind == LabelKind::Star && r.marker != 0) {
        Port c = t.across({r.node, 0});
        if (t.node(c.node).leaf) return t.node(c.node).vertex;
    }
    throw InvalidTreeError("node " + std::to_string(r.node) + " does not stand for a single vertex");
}

/// Cyclic vertex order (A1, B1, A2, B2) of the 4-cycle encoded by a star
/// pair, where A is the star that holds the smallest vertex.
inline std::pair<std::vector<Port>, std::vector<int>> pair_cycle(const GraphLabeledTree& t, std::size_t s, std::size_t s2) {
    int a1 = vertex_behind(t, {s, 1}), a2 = vertex_behind(t, {s, 2});
    int b1 = vertex_behind(t, {s2, 1}), b2 = vertex_behind(t, {s2, 2});
    if (std::min(b1, b2) < std::min(a1, a2)) {
        std::swap(s, s2);
        std::swap(a1, b1);
        std::swap(a2, b2);
    }
    return {{{s, 1}, {s2, 1}, {s, 2}, {s2, 2}}, {a1, b1, a2, b2}};
}

inline std::string describe_port(const GraphLabeledTree& t, Port p) {
    const auto& n = t.node(p.node);
    const std::string id = " node " + std::to_string(p.node);
    if (n.leaf) return "leaf " + std::to_string(n.vertex);
    if (n.label.kind == LabelKind::Star) return (p.marker == 0 ? "the centre of star" : "an extremity of star") + id;
    if (n.label.is_two_gon()) return "2-gon" + id;
    if (n.label.is_polygon()) return "polygon" + id;
    return n.label.describe() + id;
}

}  // namespace detail

struct TreeDiagnostics {
    bool valid = false;
    std::vector<std::string> messages;
};

/// Reduced split tree of a cactus: stars and polygons of size 3 or >= 5;
/// star centres at leaves or (for two 2-extremity stars) at each other;
/// extremities at leaves, polygons or extremities; polygons non-adjacent.
/// Extremities of a centre-paired star must additionally attach to leaves
/// or to extremities of stars centred at leaves; otherwise the 4-cycle
/// they encode would share more than a cut vertex with its neighbours.
inline TreeDiagnostics validate_reduced_cactus_tree(const GraphLabeledTree& t) {
    TreeDiagnostics d;
    d.messages = t.structural_problems();
    if (!d.messages.empty()) return d;
    auto& out = d.messages;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& n = t.node(i);
        if (n.leaf) continue;
        const std::string who = "node " + std::to_string(i) + " (" + n.label.describe() + ")";
        const bool star = n.label.kind == LabelKind::Star;
        if (!star && !n.label.is_polygon()) {
            out.push_back(who + ": label must be a star or a polygon");
            continue;
        }
        if (n.label.kind == LabelKind::Cycle && n.label.size == 4) {
            out.push_back(who + ": polygons must have size 3 or at least 5");
            continue;
        }
        if (n.links.size() < 3) out.push_back(who + ": internal node has degree less than 3");
        if (star) {
            Port c = t.across({i, 0});
            auto pair = detail::paired_star(t, i);
            bool ok = t.node(c.node).leaf || (pair && n.label.size == 3 && t.node(*pair).label.size == 3);
            if (!ok)
                out.push_back(who + ": star centre is attached to " + detail::describe_port(t, c) +
                              " (allowed: a leaf, or the centre of another star when both have exactly two extremities)");
            for (std::size_t m = 1; m < n.links.size(); ++m) {
                Port q = t.across({i, m});
                const auto& w = t.node(q.node);
                bool allowed = w.leaf || (!w.leaf && w.label.is_polygon()) || detail::is_extremity(t, q);
                if (!allowed) {
                    out.push_back(who + ": star extremity " + std::to_string(m) + " is attached to " + detail::describe_port(t, q) +
                                  " (allowed: a leaf, a polygon, or an extremity of another star)");
                } else if (pair) {
                    bool fine = w.leaf || (detail::is_extremity(t, q) && t.node(t.across({q.node, 0}).node).leaf);
                    if (!fine)
                        out.push_back(who + ": extremity " + std::to_string(m) + " of a centre-paired star is attached to " +
                                      detail::describe_port(t, q) + " (allowed: a leaf, or an extremity of a star centred at a leaf)");
                }
            }
        } else {
            for (std::size_t m = 0; m < n.links.size(); ++m) {
                Port q = t.across({i, m});
                const auto& w = t.node(q.node);
                if (!w.leaf && w.label.is_polygon() && q.node > i)
                    out.push_back("nodes " + std::to_string(i) + " and " + std::to_string(q.node) + ": two polygons are adjacent");
            }
        }
    }
    d.valid = out.empty();
    return d;
}

/// Simplified split tree of a cactus: stars with centres at leaves and
/// extremities at leaves or polygons; polygons of any size >= 3, never
/// adjacent. A bridge between two cut vertices is kept as a 2-gon node
/// joining two star extremities.
inline TreeDiagnostics validate_simplified_cactus_tree(const GraphLabeledTree& t) {
    TreeDiagnostics d;
    d.messages = t.structural_problems();
    if (!d.messages.empty()) return d;
    auto& out = d.messages;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& n = t.node(i);
        if (n.leaf) continue;
        const std::string who = "node " + std::to_string(i) + " (" + n.label.describe() + ")";
        if (n.label.kind == LabelKind::Star) {
            Port c = t.across({i, 0});
            if (!t.node(c.node).leaf)
                out.push_back(who + ": star centre is attached to " + detail::describe_port(t, c) + " (must be a leaf)");
            for (std::size_t m = 1; m < n.links.size(); ++m) {
                Port q = t.across({i, m});
                const auto& w = t.node(q.node);
                if (!(w.leaf || w.label.is_polygon() || w.label.is_two_gon()))
                    out.push_back(who + ": star extremity " + std::to_string(m) + " is attached to " + detail::describe_port(t, q) +
                                  " (must be a leaf or a polygon)");
            }
        } else if (n.label.is_two_gon()) {
            for (std::size_t m = 0; m < 2; ++m) {
                Port q = t.across({i, m});
                if (!detail::is_extremity(t, q))
                    out.push_back(who + ": 2-gon is attached to " + detail::describe_port(t, q) + " (must join two star extremities)");
            }
        } else if (n.label.is_polygon()) {
            for (std::size_t m = 0; m < n.links.size(); ++m) {
                Port q = t.across({i, m});
                const auto& w = t.node(q.node);
                if (!w.leaf && (w.label.is_polygon() || w.label.is_two_gon()) && q.node > i)
                    out.push_back("nodes " + std::to_string(i) + " and " + std::to_string(q.node) + ": two polygons are adjacent");
            }
        } else {
            out.push_back(who + ": label must be a star or a polygon");
        }
    }
    d.valid = out.empty();
    return d;
}

inline TreeDiagnostics validate_cactus_tree(const GraphLabeledTree& t, TreeForm form) {
    return form == TreeForm::Reduced ? validate_reduced_cactus_tree(t) : validate_simplified_cactus_tree(t);
}

namespace detail {

/// Cycle block vertices starting at the smallest vertex, oriented by the
/// rotation system when present (a cycle's two edges at a vertex appear
/// consecutively as next, previous) and towards the smaller neighbour otherwise.
inline std::vector<int> oriented_cycle(const SimpleGraph& g, const Block& b) {
    std::vector<int> order = b.vertices;
    if (!g.has_rotation()) return order;
    const int x = order[0];
    const int a = order[1], c = order.back();
    const auto& rot = g.rotation(x);
    int next = a;
    if (rot.size() == 2) {
        next = rot[0];
    } else {
        auto pos = static_cast<std::size_t>(std::find(rot.begin(), rot.end(), a) - rot.begin());
        next = rot[(pos + 1) % rot.size()] == c ? a : c;
    }
    if (next != a) std::reverse(order.begin() + 1, order.end());
    return order;
}

}  // namespace detail

/// Split decomposition tree of a cactus. Leaf i stands for vertex i.
/// Every cut vertex becomes a star whose extremities follow the rotation
/// at that vertex (or the blocks' smallest other vertex without one); every
/// cycle becomes a polygon, except that a 4-cycle becomes a centre-linked
/// star pair in the reduced form.
inline GraphLabeledTree cactus_to_split_tree(const SimpleGraph& g, TreeForm form) {
    auto check = check_cactus(g);
    if (!check.is_cactus) {
        std::string block;
        for (auto [u, v] : check.offending_block) block += " " + std::to_string(u) + "-" + std::to_string(v);
        throw NotCactusError("graph is not a cactus; offending block:" + block);
    }
    const int n = static_cast<int>(g.vertex_count());
    GraphLabeledTree t;
    for (int v = 0; v < n; ++v) t.add_leaf(v);
    if (n == 1) return t;

    auto dec = blocks_and_clusters(g);
    std::map<Edge, std::size_t> block_of_edge;
    for (std::size_t b = 0; b < dec.blocks.size(); ++b) {
        if (dec.blocks[b].is_cycle) dec.blocks[b].vertices = detail::oriented_cycle(g, dec.blocks[b]);
        for (auto e : dec.blocks[b].edges) block_of_edge[e] = b;
    }

    std::vector<std::optional<std::size_t>> star_of(n);
    std::map<std::pair<int, std::size_t>, std::size_t> marker_of;
    for (const auto& cluster : dec.clusters) {
        const int v = cluster.vertex;
        std::vector<std::size_t> order;
        if (g.has_rotation()) {
            for (int w : g.rotation(v)) {
                std::size_t b = block_of_edge.at({std::min(v, w), std::max(v, w)});
                if (std::find(order.begin(), order.end(), b) == order.end()) order.push_back(b);
            }
        } else {
            order = cluster.blocks;
            auto key = [&](std::size_t b) {
                int best = n;
                for (int x : dec.blocks[b].vertices)
                    if (x != v) best = std::min(best, x);
                return best;
            };
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
        }
        std::size_t s = t.add_node(NodeLabel::star(order.size() + 1));
        t.link({s, 0}, {static_cast<std::size_t>(v), 0});
        star_of[v] = s;
        for (std::size_t i = 0; i < order.size(); ++i) marker_of[{v, order[i]}] = i + 1;
    }

    auto attach = [&](int x, std::size_t b) -> Port {
        if (star_of[x]) return {*star_of[x], marker_of.at({x, b})};
        return {static_cast<std::size_t>(x), 0};
    };

    for (std::size_t b = 0; b < dec.blocks.size(); ++b) {
        const auto& blk = dec.blocks[b];
        const auto& xs = blk.vertices;
        if (!blk.is_cycle) {
            Port p = attach(xs[0], b), q = attach(xs[1], b);
            if (form == TreeForm::Simplified && star_of[xs[0]] && star_of[xs[1]]) {
                std::size_t two = t.add_node(NodeLabel::cycle(2));
                t.link(p, {two, 0});
                t.link({two, 1}, q);
            } else {
                t.link(p, q);
            }
        } else if (xs.size() == 4 && form == TreeForm::Reduced) {
            std::size_t a = t.add_node(NodeLabel::star(3));
            std::size_t c = t.add_node(NodeLabel::star(3));
            t.link({a, 0}, {c, 0});
            t.link({a, 1}, attach(xs[0], b));
            t.link({a, 2}, attach(xs[2], b));
            t.link({c, 1}, attach(xs[1], b));
            t.link({c, 2}, attach(xs[3], b));
        } else {
            std::size_t c = t.add_node(NodeLabel::cycle(xs.size()));
            for (std::size_t i = 0; i < xs.size(); ++i) t.link({c, i}, attach(xs[i], b));
        }
    }
    return t;
}

/// Cyclic neighbour order at every vertex as encoded by the tree: star
/// extremity order around cut vertices, marker order around polygons.
inline std::vector<std::vector<int>> rotation_from_tree(const GraphLabeledTree& t) {
    t.require_structure();
    std::vector<std::vector<int>> rot(t.leaf_count());
    auto block_neighbours = [&](Port p) -> std::vector<int> {
        Port r = t.across(p);
        const auto& w = t.node(r.node);
        if (w.leaf) return {w.vertex};
        if (w.label.is_two_gon()) return {detail::vertex_behind(t, {r.node, 1 - r.marker})};
        if (w.label.is_polygon()) {
            const std::size_t k = w.label.size;
            return {detail::vertex_behind(t, {r.node, (r.marker + 1) % k}), detail::vertex_behind(t, {r.node, (r.marker + k - 1) % k})};
        }
        if (w.label.kind == LabelKind::Star && r.marker != 0) {
            if (auto pair = detail::paired_star(t, r.node)) {
                auto [ports, verts] = detail::pair_cycle(t, r.node, *pair);
                std::size_t pos = static_cast<std::size_t>(std::find(ports.begin(), ports.end(), r) - ports.begin());
                return {verts[(pos + 1) % 4], verts[(pos + 3) % 4]};
            }
            return {t.node(t.across({r.node, 0}).node).vertex};
        }
        throw InvalidTreeError("cannot read a rotation through " + detail::describe_port(t, r));
    };
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& n = t.node(i);
        if (!n.leaf) continue;
        Port q = t.across({i, 0});
        std::vector<int>& r = rot[n.vertex];
        if (detail::is_star(t, q.node) && q.marker == 0) {
            for (std::size_t m = 1; m < t.node(q.node).links.size(); ++m)
                for (int w : block_neighbours({q.node, m})) r.push_back(w);
        } else {
            r = block_neighbours({i, 0});
        }
    }
    return rot;
}

/// Inverse of cactus_to_split_tree: the accessibility graph of a tree that
/// validates in either form, carrying the rotation the tree encodes.
inline SimpleGraph split_tree_to_cactus(const GraphLabeledTree& t) {
    auto reduced = validate_reduced_cactus_tree(t);
    if (!reduced.valid) {
        auto simplified = validate_simplified_cactus_tree(t);
        if (!simplified.valid)
            throw InvalidTreeError("not a cactus split tree: reduced form: " + reduced.messages.front() +
                                   "; simplified form: " + simplified.messages.front());
    }
    SimpleGraph g = accessibility(t);
    auto rot = rotation_from_tree(t);
    for (int v = 0; v < static_cast<int>(rot.size()); ++v) g.set_rotation(v, rot[v]);
    return g;
}

namespace detail {

/// Builds a copy of t with some nodes replaced; `port_map` translates every
/// surviving old port to its new port.
struct Rebuild {
    GraphLabeledTree out;
    std::map<Port, Port> port_map;
    std::vector<std::optional<std::size_t>> node_map;
};

inline Rebuild copy_plain_nodes(const GraphLabeledTree& t, const std::function<bool(std::size_t)>& replaced) {
    Rebuild r;
    r.node_map.resize(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (replaced(i)) continue;
        const auto& n = t.node(i);
        std::size_t j = n.leaf ? r.out.add_leaf(n.vertex) : r.out.add_node(n.label);
        r.node_map[i] = j;
        for (std::size_t m = 0; m < n.links.size(); ++m) r.port_map[{i, m}] = {j, m};
    }
    return r;
}

inline GraphLabeledTree to_simplified(const GraphLabeledTree& t) {
    auto in_pair = [&](std::size_t i) { return paired_star(t, i).has_value(); };
    Rebuild r = copy_plain_nodes(t, in_pair);
    for (std::size_t i = 0; i < t.size(); ++i) {
        auto other = paired_star(t, i);
        if (!other || *other < i) continue;
        auto [ports, verts] = pair_cycle(t, i, *other);
        std::size_t c = r.out.add_node(NodeLabel::cycle(4));
        for (std::size_t k = 0; k < 4; ++k) r.port_map[ports[k]] = {c, k};
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t m = 0; m < t.node(i).links.size(); ++m) {
            Port a{i, m}, b = t.across(a);
            if (b < a) continue;
            if (in_pair(i) && m == 0) continue;
            bool bridge = is_extremity(t, a) && is_extremity(t, b) && !in_pair(a.node) && !in_pair(b.node);
            if (bridge) {
                std::size_t two = r.out.add_node(NodeLabel::cycle(2));
                r.out.link(r.port_map.at(a), {two, 0});
                r.out.link({two, 1}, r.port_map.at(b));
            } else {
                r.out.link(r.port_map.at(a), r.port_map.at(b));
            }
        }
    }
    return std::move(r.out);
}

inline GraphLabeledTree to_reduced(const GraphLabeledTree& t) {
    auto square = [&](std::size_t i) { return !t.node(i).leaf && t.node(i).label.kind == LabelKind::Cycle && t.node(i).label.size == 4; };
    auto two_gon = [&](std::size_t i) { return !t.node(i).leaf && t.node(i).label.is_two_gon(); };
    Rebuild r = copy_plain_nodes(t, [&](std::size_t i) { return square(i) || two_gon(i); });
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!square(i)) continue;
        int verts[4];
        for (std::size_t k = 0; k < 4; ++k) verts[k] = vertex_behind(t, {i, k});
        std::size_t s = static_cast<std::size_t>(std::min_element(verts, verts + 4) - verts);
        std::size_t a = r.out.add_node(NodeLabel::star(3));
        std::size_t b = r.out.add_node(NodeLabel::star(3));
        r.out.link({a, 0}, {b, 0});
        r.port_map[{i, s}] = {a, 1};
        r.port_map[{i, (s + 2) % 4}] = {a, 2};
        r.port_map[{i, (s + 1) % 4}] = {b, 1};
        r.port_map[{i, (s + 3) % 4}] = {b, 2};
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t m = 0; m < t.node(i).links.size(); ++m) {
            Port a{i, m}, b = t.across(a);
            if (b < a || two_gon(a.node) || two_gon(b.node)) continue;
            r.out.link(r.port_map.at(a), r.port_map.at(b));
        }
    }
    for (std::size_t i = 0; i < t.size(); ++i)
        if (two_gon(i)) r.out.link(r.port_map.at(t.across({i, 0})), r.port_map.at(t.across({i, 1})));
    return std::move(r.out);
}

}  // namespace detail

/// Converts between the reduced and simplified forms (star pair <-> 4-cycle,
/// direct extremity link <-> 2-gon). The accessibility graph is unchanged.
inline GraphLabeledTree convert_form(const GraphLabeledTree& t, TreeForm target) {
    auto reduced = validate_reduced_cactus_tree(t);
    auto simplified = validate_simplified_cactus_tree(t);
    if (!reduced.valid && !simplified.valid)
        throw InvalidTreeError("input is not a valid cactus split tree: " + reduced.messages.front());
    GraphLabeledTree out = target == TreeForm::Simplified ? detail::to_simplified(t) : detail::to_reduced(t);
    auto check = validate_cactus_tree(out, target);
    if (!check.valid) throw InvalidTreeError("conversion produced an invalid tree: " + check.messages.front());
    return out;
}

inline GraphLabeledTree simplify_tree(const GraphLabeledTree& t) { return convert_form(t, TreeForm::Simplified); }
inline GraphLabeledTree reduce_tree(const GraphLabeledTree& t) { return convert_form(t, TreeForm::Reduced); }

// ---------------------------------------------------------------------------
// Canonical strings

namespace detail {

inline std::string canonical_from(const GraphLabeledTree& t, Port entry, bool ordered) {
    const auto& n = t.node(entry.node);
    if (n.leaf) return "L" + std::to_string(n.vertex);
    const std::size_t k = n.links.size();
    auto child = [&](std::size_t m) { return canonical_from(t, t.across({entry.node, m}), ordered); };
    std::vector<std::string> parts;
    std::string tag;
    switch (n.label.kind) {
        case LabelKind::Cycle: {
            tag = "C" + std::to_string(k);
            for (std::size_t s = 1; s < k; ++s) parts.push_back(child((entry.marker + s) % k));
            if (!ordered) {
                std::vector<std::string> rev(parts.rbegin(), parts.rend());
                parts = std::min(parts, rev);
            }
            break;
        }
        case LabelKind::Star: {
            tag = "S" + std::to_string(k) + (entry.marker == 0 ? "c" : "x");
            std::vector<std::string> rest;
            for (std::size_t m = 1; m < k; ++m)
                rest.push_back(m == entry.marker ? std::string("^") : child(m));
            if (!ordered) {
                rest.erase(std::remove(rest.begin(), rest.end(), std::string("^")), rest.end());
                std::sort(rest.begin(), rest.end());
            }
            if (entry.marker != 0) parts.push_back(child(0));
            parts.insert(parts.end(), rest.begin(), rest.end());
            break;
        }
        case LabelKind::Clique: {
            tag = (!ordered && k == 3 ? "C" : "K") + std::to_string(k);
            for (std::size_t m = 0; m < k; ++m) parts.push_back(m == entry.marker ? std::string("^") : child(m));
            if (!ordered) {
                parts.erase(std::remove(parts.begin(), parts.end(), std::string("^")), parts.end());
                std::sort(parts.begin(), parts.end());
            }
            break;
        }
        case LabelKind::Explicit: {
            tag = "G" + std::to_string(k) + "@" + std::to_string(entry.marker) + "{";
            for (auto [u, v] : n.label.edges) tag += std::to_string(u) + "-" + std::to_string(v) + ",";
            tag += "}";
            for (std::size_t m = 0; m < k; ++m) parts.push_back(m == entry.marker ? std::string("^") : child(m));
            break;
        }
    }
    std::string s = tag + "(";
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
    return s + ")";
}

inline std::string canonical(const GraphLabeledTree& t, bool ordered) {
    t.require_structure();
    auto leaf = t.leaf_of(0);
    if (!leaf) throw InvalidTreeError("tree has no leaf for vertex 0");
    return "L0(" + (t.size() == 1 ? std::string() : canonical_from(t, t.across({*leaf, 0}), ordered)) + ")";
}

}  // namespace detail

/// Identifies a tree up to node numbering, keeping marker orders (up to
/// rotation of cycles) so plane information is compared too.
inline std::string canonical_string(const GraphLabeledTree& t) { return detail::canonical(t, true); }

/// As canonical_string but ignoring star extremity order and cycle orientation.
inline std::string unordered_canonical_string(const GraphLabeledTree& t) { return detail::canonical(t, false); }

// ---------------------------------------------------------------------------
// Brute-force split decomposition for small graphs

/// Split decomposition of a small connected graph: labels that are neither
/// degenerate nor prime are split until none is left, then clique-clique
/// and star centre-to-extremity tree edges are contracted, which leaves the
/// reduced tree. Exponential; limited to 12 vertices.
inline GraphLabeledTree brute_force_split_decomposition(const SimpleGraph& g) {
    const std::size_t n = g.vertex_count();
    if (n > 12) throw ResourceError("brute-force split decomposition is limited to 12 vertices");
    if (!is_connected(g)) throw Error("split decomposition requires a connected graph");
    GraphLabeledTree t;
    for (std::size_t v = 0; v < n; ++v) t.add_leaf(static_cast<int>(v));
    if (n == 1) return t;
    if (n == 2) {
        t.link({0, 0}, {1, 0});
        return t;
    }

    // ends[m] is the far side of marker m: another work node, or (leaf, v).
    struct Work {
        SimpleGraph label;
        std::vector<Port> ends;
        bool alive = true;
    };
    constexpr std::size_t leaf = static_cast<std::size_t>(-1);
    std::vector<Work> work{Work{g, {}, true}};
    for (std::size_t v = 0; v < n; ++v) work[0].ends.push_back({leaf, v});
    auto redirect = [&](std::size_t i) {
        for (std::size_t m = 0; m < work[i].ends.size(); ++m) {
            Port far = work[i].ends[m];
            if (far.node != leaf) work[far.node].ends[far.marker] = {i, m};
        }
    };

    for (std::size_t i = 0; i < work.size(); ++i) {
        if (work[i].label.vertex_count() < 4 || is_degenerate(work[i].label)) continue;
        auto splits = find_splits(work[i].label);
        if (splits.empty()) continue;
        const SimpleGraph h = work[i].label;
        const std::vector<Port> ends = work[i].ends;
        const std::size_t idx[2] = {i, work.size()};
        const std::vector<int>* sides[2] = {&splits.front().first, &splits.front().second};
        work.push_back(Work{SimpleGraph(0), {}, true});
        for (int s = 0; s < 2; ++s) {
            const auto& side = *sides[s];
            const auto& other = *sides[1 - s];
            std::map<int, int> local;
            for (std::size_t j = 0; j < side.size(); ++j) local[side[j]] = static_cast<int>(j);
            const int extra = static_cast<int>(side.size());
            SimpleGraph part(side.size() + 1);
            for (auto [u, v] : h.edges())
                if (local.count(u) && local.count(v)) part.add_edge(local[u], local[v]);
            for (int u : side)
                if (std::any_of(other.begin(), other.end(), [&](int w) { return h.has_edge(u, w); }))
                    part.add_edge(local[u], extra);
            Work w{part, {}, true};
            for (int u : side) w.ends.push_back(ends[static_cast<std::size_t>(u)]);
            w.ends.push_back({idx[1 - s], other.size()});
            work[idx[s]] = std::move(w);
        }
        redirect(idx[0]);
        redirect(idx[1]);
        --i;
    }

    auto centre = [](const SimpleGraph& h) -> std::optional<int> {
        if (h.vertex_count() < 3 || is_clique(h)) return std::nullopt;
        return star_center(h);
    };
    auto contractible = [&](std::size_t i, std::size_t m, std::size_t j, std::size_t q) {
        const auto& a = work[i].label;
        const auto& b = work[j].label;
        if (is_clique(a) && is_clique(b)) return true;
        auto ca = centre(a), cb = centre(b);
        if (!ca || !cb) return false;
        const bool am = static_cast<std::size_t>(*ca) == m, bq = static_cast<std::size_t>(*cb) == q;
        return am != bq;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < work.size() && !changed; ++i) {
            if (!work[i].alive) continue;
            for (std::size_t m = 0; m < work[i].ends.size() && !changed; ++m) {
                const Port far = work[i].ends[m];
                if (far.node == leaf || !contractible(i, m, far.node, far.marker)) continue;
                const Work& a = work[i];
                const Work& b = work[far.node];
                std::vector<int> from_a, from_b;
                Work merged{SimpleGraph(a.ends.size() + b.ends.size() - 2), {}, true};
                for (std::size_t u = 0; u < a.ends.size(); ++u) {
                    from_a.push_back(u == m ? -1 : static_cast<int>(merged.ends.size()));
                    if (u != m) merged.ends.push_back(a.ends[u]);
                }
                for (std::size_t u = 0; u < b.ends.size(); ++u) {
                    from_b.push_back(u == far.marker ? -1 : static_cast<int>(merged.ends.size()));
                    if (u != far.marker) merged.ends.push_back(b.ends[u]);
                }
                for (auto [u, v] : a.label.edges())
                    if (from_a[u] >= 0 && from_a[v] >= 0) merged.label.add_edge(from_a[u], from_a[v]);
                for (auto [u, v] : b.label.edges())
                    if (from_b[u] >= 0 && from_b[v] >= 0) merged.label.add_edge(from_b[u], from_b[v]);
                for (int u : a.label.neighbors(static_cast<int>(m)))
                    for (int v : b.label.neighbors(static_cast<int>(far.marker))) merged.label.add_edge(from_a[u], from_b[v]);
                work[far.node].alive = false;
                work[i] = std::move(merged);
                redirect(i);
                changed = true;
            }
        }
    }

    std::vector<std::size_t> id(work.size());
    std::vector<std::vector<std::size_t>> marker_perm(work.size());
    for (std::size_t i = 0; i < work.size(); ++i) {
        if (!work[i].alive) continue;
        const SimpleGraph& h = work[i].label;
        const std::size_t k = h.vertex_count();
        std::vector<std::size_t> perm(k);
        for (std::size_t m = 0; m < k; ++m) perm[m] = m;
        bool cycle = k >= 4 && h.edge_count() == k && is_connected(h);
        for (std::size_t m = 0; m < k && cycle; ++m) cycle = h.degree(static_cast<int>(m)) == 2;
        NodeLabel label;
        if (is_clique(h)) {
            label = NodeLabel::clique(k);
        } else if (auto c = star_center(h)) {
            label = NodeLabel::star(k);
            std::swap(perm[0], perm[static_cast<std::size_t>(*c)]);
        } else if (cycle) {
            label = NodeLabel::cycle(k);
            std::vector<int> order{0};
            int prev = -1, cur = 0;
            while (order.size() < k) {
                const auto& nb = h.neighbors(cur);
                int next = prev == -1 ? std::min(nb[0], nb[1]) : (nb[0] != prev ? nb[0] : nb[1]);
                order.push_back(next);
                prev = cur;
                cur = next;
            }
            for (std::size_t j = 0; j < k; ++j) perm[static_cast<std::size_t>(order[j])] = j;
        } else {
            label = NodeLabel::explicit_graph(k, h.edges());
        }
        marker_perm[i] = perm;
        id[i] = t.add_node(label);
    }
    for (std::size_t i = 0; i < work.size(); ++i) {
        if (!work[i].alive) continue;
        for (std::size_t m = 0; m < work[i].ends.size(); ++m) {
            const Port far = work[i].ends[m];
            const Port here{id[i], marker_perm[i][m]};
            if (far.node == leaf) t.link(here, {far.marker, 0});
            else if (far.node > i) t.link(here, {id[far.node], marker_perm[far.node][far.marker]});
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// Text formats

/// GLT text format, one record per line (`#` comments):
///   leaf ID VERTEX | star ID K | cycle ID K | clique ID K
///   graph ID K u-v u-v ... | link ID MARKER ID MARKER
/// A star's centre is marker 0; cycle markers are listed in cyclic order.
inline GraphLabeledTree parse_glt(std::istream& in) {
    GraphLabeledTree t;
    std::map<long, std::size_t> ids;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& what) -> void {
        throw InvalidTreeError("tree file line " + std::to_string(line_no) + ": " + what);
    };
    auto lookup = [&](long id) {
        auto it = ids.find(id);
        if (it == ids.end()) fail("unknown node id " + std::to_string(id));
        return it->second;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        if (kind == "link") {
            long a, b;
            std::size_t pa, pb;
            if (!(ls >> a >> pa >> b >> pb)) fail("expected 'link ID MARKER ID MARKER'");
            try {
                t.link({lookup(a), pa}, {lookup(b), pb});
            } catch (const InvalidTreeError& e) {
                fail(e.what());
            }
            continue;
        }
        long id;
        if (!(ls >> id)) fail("expected a node id");
        if (ids.count(id)) fail("duplicate node id " + std::to_string(id));
        if (kind == "leaf") {
            int v;
            if (!(ls >> v)) fail("expected 'leaf ID VERTEX'");
            ids[id] = t.add_leaf(v);
            continue;
        }
        std::size_t k;
        if (!(ls >> k) || k < 2) fail("expected a marker count of at least 2");
        if (kind == "star") {
            ids[id] = t.add_node(NodeLabel::star(k));
        } else if (kind == "cycle") {
            ids[id] = t.add_node(NodeLabel::cycle(k));
        } else if (kind == "clique") {
            ids[id] = t.add_node(NodeLabel::clique(k));
        } else if (kind == "graph") {
            std::vector<Edge> edges;
            std::string tok;
            while (ls >> tok) {
                auto dash = tok.find('-');
                if (dash == std::string::npos) fail("expected label edge 'u-v'");
                edges.emplace_back(std::stoi(tok.substr(0, dash)), std::stoi(tok.substr(dash + 1)));
            }
            ids[id] = t.add_node(NodeLabel::explicit_graph(k, edges));
        } else {
            fail("unknown record '" + kind + "'");
        }
    }
    return t;
}

inline GraphLabeledTree parse_glt(const std::string& text) {
    std::istringstream in(text);
    return parse_glt(in);
}

inline void write_glt(const GraphLabeledTree& t, std::ostream& out, const std::vector<std::string>& comments = {}) {
    for (const auto& c : comments) out << "# " << c << "\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& n = t.node(i);
        if (n.leaf) {
            out << "leaf " << i << " " << n.vertex << "\n";
            continue;
        }
        switch (n.label.kind) {
            case LabelKind::Star: out << "star " << i << " " << n.label.size; break;
            case LabelKind::Cycle: out << "cycle " << i << " " << n.label.size; break;
            case LabelKind::Clique: out << "clique " << i << " " << n.label.size; break;
            case LabelKind::Explicit:
                out << "graph " << i << " " << n.label.size;
                for (auto [u, v] : n.label.edges) out << " " << u << "-" << v;
                break;
        }
        out << "\n";
    }
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t m = 0; m < t.node(i).links.size(); ++m) {
            const auto& l = t.node(i).links[m];
            if (l && Port{i, m} < *l) out << "link " << i << " " << m << " " << l->node << " " << l->marker << "\n";
        }
}

inline std::string to_glt_text(const GraphLabeledTree& t, const std::vector<std::string>& comments = {}) {
    std::ostringstream out;
    write_glt(t, out, comments);
    return out.str();
}

/// DOT export: each internal node is a cluster of its marker vertices with
/// the label edges inside; tree edges join markers (or leaves) across clusters.
inline void write_glt_dot(const GraphLabeledTree& t, std::ostream& out, const std::vector<std::string>& comments = {}) {
    for (const auto& c : comments) out << "// " << c << "\n";
    out << "graph split_tree {\n  compound=true;\n  node [shape=point, width=0.08];\n";
    auto name = [&](Port p) {
        return t.node(p.node).leaf ? "leaf" + std::to_string(p.node) : "n" + std::to_string(p.node) + "_" + std::to_string(p.marker);
    };
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& n = t.node(i);
        if (n.leaf) {
            out << "  leaf" << i << " [shape=circle, width=0.3, label=\"" << n.vertex << "\"];\n";
            continue;
        }
        out << "  subgraph cluster_" << i << " {\n    label=\"" << n.label.describe() << "\";\n";
        for (std::size_t m = 0; m < n.label.size; ++m) {
            out << "    n" << i << "_" << m;
            if (n.label.kind == LabelKind::Star && m == 0) out << " [shape=point, width=0.12, color=red]";
            out << ";\n";
        }
        for (std::size_t a = 0; a < n.label.size; ++a)
            for (std::size_t b = a + 1; b < n.label.size; ++b)
                if (n.label.adjacent(a, b)) out << "    n" << i << "_" << a << " -- n" << i << "_" << b << ";\n";
        out << "  }\n";
    }
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t m = 0; m < t.node(i).links.size(); ++m) {
            const auto& l = t.node(i).links[m];
            if (l && Port{i, m} < *l) out << "  " << name({i, m}) << " -- " << name(*l) << " [style=bold, color=gray40];\n";
        }
    out << "}\n";
}

}  // namespace cactus
