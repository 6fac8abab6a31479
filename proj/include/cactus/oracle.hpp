#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <gmpxx.h>

#include "cactus/error.hpp"
#include "cactus/grammar.hpp"
#include "cactus/omega.hpp"
#include "cactus/structure.hpp"

// Brute-force ground truth. Nothing here uses the series or counting code.

namespace cactus::oracle {

using Integer = mpz_class;

// ---------------------------------------------------------------------------
// Graph census

inline constexpr std::size_t census_limit = 7;

struct CensusResult {
    OmegaSpec omega;
    std::size_t n_max = 0;
    std::vector<Integer> labeled, unlabeled;                // index n, entry 0 unused
    std::vector<Integer> labeled_rooted, unlabeled_rooted;
    double seconds = 0;
};

namespace detail {

using Adjacency = std::array<std::uint8_t, census_limit>;

inline int pair_index(int n, int i, int j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

inline Adjacency adjacency_of(int n, std::uint32_t mask) {
    Adjacency adj{};
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (mask >> pair_index(n, i, j) & 1u) {
                adj[i] |= std::uint8_t(1u << j);
                adj[j] |= std::uint8_t(1u << i);
            }
    return adj;
}

inline bool connected(int n, const Adjacency& adj) {
    unsigned seen = 1, frontier = 1;
    while (frontier) {
        unsigned next = 0;
        for (int v = 0; v < n; ++v)
            if (frontier >> v & 1u) next |= adj[v];
        frontier = next & ~seen;
        seen |= next;
    }
    return seen == (1u << n) - 1;
}

/// Block sizes (a bridge counts 2) if the connected graph is a cactus.
class BlockFinder {
public:
    BlockFinder(int n, const Adjacency& adj) : n_(n), adj_(adj) {}

    std::optional<std::vector<int>> run() {
        ok_ = true;
        dfs(0, -1);
        if (!ok_) return std::nullopt;
        return sizes_;
    }

private:
    void dfs(int v, int parent) {
        disc_[v] = low_[v] = ++time_;
        for (int w = 0; w < n_; ++w) {
            if (!(adj_[v] >> w & 1) || w == parent) continue;
            if (!disc_[w]) {
                stack_.push_back({v, w});
                dfs(w, v);
                low_[v] = std::min(low_[v], low_[w]);
                if (low_[w] >= disc_[v]) close_block(v, w);
            } else if (disc_[w] < disc_[v]) {
                stack_.push_back({v, w});
                low_[v] = std::min(low_[v], disc_[w]);
            }
        }
    }

    void close_block(int v, int w) {
        unsigned vertices = 0;
        int edges = 0;
        while (true) {
            auto e = stack_.back();
            stack_.pop_back();
            vertices |= 1u << e.first | 1u << e.second;
            ++edges;
            if (e.first == v && e.second == w) break;
        }
        const int k = __builtin_popcount(vertices);
        if (edges != 1 && edges != k) ok_ = false;
        sizes_.push_back(edges == 1 ? 2 : k);
    }

    int n_;
    Adjacency adj_;
    std::array<int, census_limit> disc_{}, low_{};
    int time_ = 0;
    bool ok_ = true;
    std::vector<std::pair<int, int>> stack_;
    std::vector<int> sizes_;
};

/// Minimum edge mask over relabelings that respect an invariant vertex
/// colouring (degree refinement; the root, if any, gets its own colour).
inline std::uint32_t canonical_mask(int n, const Adjacency& adj, int root = -1) {
    std::vector<int> colour(n);
    for (int v = 0; v < n; ++v) colour[v] = v == root ? -1 : __builtin_popcount(adj[v]);
    std::size_t classes = 0;
    while (true) {
        std::vector<std::pair<int, std::vector<int>>> sig(n);
        for (int v = 0; v < n; ++v) {
            sig[v].first = colour[v];
            for (int w = 0; w < n; ++w)
                if (adj[v] >> w & 1) sig[v].second.push_back(colour[w]);
            std::sort(sig[v].second.begin(), sig[v].second.end());
        }
        std::vector<std::pair<int, std::vector<int>>> sorted(sig);
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (int v = 0; v < n; ++v)
            colour[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sig[v]) - sorted.begin());
        if (sorted.size() == classes) break;
        classes = sorted.size();
    }
    std::vector<std::vector<int>> cells(classes);
    for (int v = 0; v < n; ++v) cells[static_cast<std::size_t>(colour[v])].push_back(v);

    std::uint32_t best = UINT32_MAX;
    std::vector<int> position(n);
    while (true) {
        int p = 0;
        for (const auto& cell : cells)
            for (int v : cell) position[v] = p++;
        std::uint32_t mask = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (adj[i] >> j & 1) mask |= 1u << pair_index(n, position[i], position[j]);
        best = std::min(best, mask);
        std::size_t c = 0;
        while (c < cells.size() && !std::next_permutation(cells[c].begin(), cells[c].end())) ++c;
        if (c == cells.size()) break;
    }
    return best;
}

}  // namespace detail

/// Exhaustive census of connected cacti on n <= n_max vertices whose
/// cycle lengths lie in Omega (bridges count as length 2). Every labeled
/// graph is listed by edge subset; unlabeled counts dedupe canonical forms.
inline CensusResult census(const OmegaSpec& omega, std::size_t n_max) {
    if (n_max > census_limit)
        throw ResourceError("census is limited to n <= " + std::to_string(census_limit) + " (requested " +
                            std::to_string(n_max) + ")");
    const auto start = std::chrono::steady_clock::now();
    CensusResult r;
    r.omega = omega;
    r.n_max = n_max;
    r.labeled.assign(n_max + 1, 0);
    r.unlabeled = r.labeled_rooted = r.unlabeled_rooted = r.labeled;
    for (std::size_t nn = 1; nn <= n_max; ++nn) {
        const int n = static_cast<int>(nn);
        const int pairs = n * (n - 1) / 2;
        const int lo = n - 1, hi = 3 * (n - 1) / 2;
        std::set<std::uint32_t> forms;
        for (std::uint32_t mask = 0; mask < (1u << pairs); ++mask) {
            const int e = __builtin_popcount(mask);
            if (e < lo || e > hi) continue;
            auto adj = detail::adjacency_of(n, mask);
            if (!detail::connected(n, adj)) continue;
            auto blocks = detail::BlockFinder(n, adj).run();
            if (!blocks) continue;
            if (!std::all_of(blocks->begin(), blocks->end(), [&](int k) { return omega.contains(k); })) continue;
            r.labeled[nn] += 1;
            if (!forms.insert(detail::canonical_mask(n, adj)).second) continue;
            std::set<std::uint32_t> rooted;
            for (int v = 0; v < n; ++v) rooted.insert(detail::canonical_mask(n, adj, v));
            r.unlabeled_rooted[nn] += static_cast<unsigned long>(rooted.size());
        }
        r.unlabeled[nn] = static_cast<unsigned long>(forms.size());
        r.labeled_rooted[nn] = r.labeled[nn] * static_cast<unsigned long>(n);
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

// ---------------------------------------------------------------------------
// Orbit counting

enum class Group { Trivial, Cyclic, Reversal, Dihedral, Symmetric };

inline const char* to_string(Group g) {
    switch (g) {
        case Group::Trivial: return "trivial";
        case Group::Cyclic: return "cyclic";
        case Group::Reversal: return "reversal";
        case Group::Dihedral: return "dihedral";
        case Group::Symmetric: return "symmetric";
    }
    return "";
}

inline std::optional<Group> group_from_string(const std::string& s) {
    for (Group g : {Group::Trivial, Group::Cyclic, Group::Reversal, Group::Dihedral, Group::Symmetric})
        if (s == to_string(g)) return g;
    return std::nullopt;
}

namespace detail {

/// Generators of the group as position permutations p (slot i takes slot p[i]).
inline std::vector<std::vector<int>> generators(std::size_t m, Group g) {
    std::vector<std::vector<int>> out;
    std::vector<int> id(m);
    for (std::size_t i = 0; i < m; ++i) id[i] = static_cast<int>(i);
    auto shift = id, rev = id;
    std::rotate(shift.begin(), shift.begin() + (m ? 1 : 0), shift.end());
    std::reverse(rev.begin(), rev.end());
    if (g == Group::Cyclic || g == Group::Dihedral) out.push_back(shift);
    if (g == Group::Reversal || g == Group::Dihedral) out.push_back(rev);
    if (g == Group::Symmetric)
        for (std::size_t i = 0; i + 1 < m; ++i) {
            auto t = id;
            std::swap(t[i], t[i + 1]);
            out.push_back(t);
        }
    return out;
}

inline std::vector<int> act(const std::vector<int>& perm, const std::vector<int>& word) {
    std::vector<int> out(word.size());
    for (std::size_t i = 0; i < word.size(); ++i) out[i] = word[static_cast<std::size_t>(perm[i])];
    return out;
}

/// Orbit partition of `points` (closed under the generators) by search.
template <class Index>
std::vector<std::size_t> orbit_sizes(std::size_t count, const std::vector<std::vector<int>>& gens, Index index,
                                     std::vector<int> (*decode)(std::size_t, std::size_t, std::size_t),
                                     std::size_t m, std::size_t q) {
    std::vector<char> seen(count, 0);
    std::vector<std::size_t> sizes;
    for (std::size_t s = 0; s < count; ++s) {
        if (seen[s]) continue;
        seen[s] = 1;
        std::vector<std::size_t> stack{s};
        std::size_t size = 0;
        while (!stack.empty()) {
            std::size_t x = stack.back();
            stack.pop_back();
            ++size;
            const auto word = decode(x, m, q);
            for (const auto& g : gens) {
                std::size_t y = index(act(g, word));
                if (!seen[y]) {
                    seen[y] = 1;
                    stack.push_back(y);
                }
            }
        }
        sizes.push_back(size);
    }
    return sizes;
}

inline std::vector<int> decode_word(std::size_t x, std::size_t m, std::size_t q) {
    std::vector<int> w(m);
    for (std::size_t i = 0; i < m; ++i) {
        w[i] = static_cast<int>(x % q);
        x /= q;
    }
    return w;
}

inline std::vector<int> decode_arrangement(std::size_t x, std::size_t m, std::size_t) {
    std::vector<int> pool(m), w;
    for (std::size_t i = 0; i < m; ++i) pool[i] = static_cast<int>(i);
    for (std::size_t i = m; i > 0; --i) {
        std::size_t f = 1;
        for (std::size_t k = 2; k < i; ++k) f *= k;
        std::size_t d = x / f;
        x %= f;
        w.push_back(pool[d]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(d));
    }
    return w;
}

inline std::size_t rank_arrangement(const std::vector<int>& w) {
    std::size_t r = 0;
    const std::size_t m = w.size();
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t smaller = 0;
        for (std::size_t j = i + 1; j < m; ++j)
            if (w[j] < w[i]) ++smaller;
        r = r * (m - i) + smaller;
    }
    return r;
}

inline std::size_t group_order(std::size_t m, Group g) {
    std::vector<int> id(m);
    for (std::size_t i = 0; i < m; ++i) id[i] = static_cast<int>(i);
    std::set<std::vector<int>> elems{id};
    std::vector<std::vector<int>> stack{id};
    const auto gens = generators(m, g);
    while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        for (const auto& s : gens) {
            auto y = act(s, x);
            if (elems.insert(y).second) stack.push_back(y);
        }
    }
    return elems.size();
}

}  // namespace detail

/// Orbits of the q^m words of length m under the group acting on positions.
inline std::uint64_t burnside_orbits(std::size_t m, std::size_t q, Group g) {
    double words = 1;
    for (std::size_t i = 0; i < m; ++i) words *= static_cast<double>(q);
    if (words > 1e7) throw ResourceError("q^m exceeds 10^7");
    const std::size_t count = static_cast<std::size_t>(words);
    if (q == 0) return m == 0 ? 1 : 0;
    auto index = [q](const std::vector<int>& w) {
        std::size_t x = 0;
        for (std::size_t i = w.size(); i-- > 0;) x = x * q + static_cast<std::size_t>(w[i]);
        return x;
    };
    return detail::orbit_sizes(count, detail::generators(m, g), index, detail::decode_word, m, q).size();
}

/// Orbits of the m! arrangements of distinct labels; throws unless every
/// orbit has the size of the group (free action).
inline std::uint64_t labeled_arrangement_orbits(std::size_t m, Group g) {
    if (m > 9) throw ResourceError("m! exceeds the arrangement limit");
    std::size_t count = 1;
    for (std::size_t k = 2; k <= m; ++k) count *= k;
    const auto sizes = detail::orbit_sizes(count, detail::generators(m, g), detail::rank_arrangement,
                                           detail::decode_arrangement, m, 0);
    const std::size_t order = detail::group_order(m, g);
    for (std::size_t s : sizes)
        if (s != order) throw Error("group does not act freely on arrangements");
    return sizes.size();
}

// ---------------------------------------------------------------------------
// Sequences

/// Rooted unlabeled trees by number of vertices (Euler transform recurrence).
inline std::vector<Integer> rooted_tree_counts(std::size_t n_max) {
    std::vector<Integer> r(n_max + 1, 0);
    if (n_max >= 1) r[1] = 1;
    std::vector<Integer> s(n_max + 1, 0);
    for (std::size_t n = 1; n < n_max; ++n) {
        for (std::size_t d = 1; d <= n; ++d)
            if (n % d == 0) s[n] += Integer(static_cast<unsigned long>(d)) * r[d];
        Integer total = 0;
        for (std::size_t k = 1; k <= n; ++k) total += s[k] * r[n - k + 1];
        r[n + 1] = total / static_cast<unsigned long>(n);
    }
    return r;
}

/// Coefficients 0..order-1 of prod_{n>=1} (1 - x^n)^(-a_n), a_0 ignored.
inline std::vector<Integer> multiset_product(const std::vector<Integer>& a, std::size_t order) {
    std::vector<Integer> c(order, 0);
    if (order == 0) return c;
    c[0] = 1;
    for (std::size_t n = 1; n < order && n < a.size(); ++n) {
        if (sgn(a[n]) == 0) continue;
        if (sgn(a[n]) < 0) throw Error("multiset product needs non-negative coefficients");
        std::vector<Integer> factor(order, 0);
        Integer binom = 1;
        for (std::size_t k = 0; k * n < order; ++k) {
            if (k > 0) binom = binom * (a[n] + static_cast<unsigned long>(k - 1)) / static_cast<unsigned long>(k);
            factor[k * n] = binom;
        }
        std::vector<Integer> next(order, 0);
        for (std::size_t i = 0; i < order; ++i)
            if (sgn(c[i]))
                for (std::size_t j = 0; i + j < order; j += n) next[i + j] += c[i] * factor[j];
        c = std::move(next);
    }
    return c;
}

// ---------------------------------------------------------------------------
// Structure enumeration

inline constexpr std::size_t default_structure_cap = 2000000;

namespace detail {

class Enumerator {
public:
    Enumerator(const GrammarSystem& g, std::size_t cap) : g_(g), val_(valuation(g)), cap_(cap) {}

    std::vector<Structure> root(std::size_t n) {
        std::vector<Structure> out;
        std::size_t alt = 0;
        for (const auto& t : g_.root) {
            std::vector<Structure> items;
            if (t.kind == RootTerm::Kind::Rule) items = rule(t.name, n);
            else if (t.kind == RootTerm::Kind::Atom && n == 1) items.push_back(Structure::atom());
            else if (t.kind == RootTerm::Kind::One && n == 0) items.push_back(Structure::one());
            if (g_.root.size() == 1 && t.coefficient == 1) return items;
            for (long copy = 0; copy < t.coefficient; ++copy, ++alt)
                for (const auto& s : items) push(out, Structure::choice(alt, s));
        }
        return out;
    }

private:
    void push(std::vector<Structure>& out, Structure s) {
        if (out.size() >= cap_)
            throw ResourceError("structure enumeration exceeds " + std::to_string(cap_) + " items");
        out.push_back(std::move(s));
    }

    std::size_t least(const Expr& e) const {
        auto v = expression_valuation(e, val_, g_.omega);
        return v ? static_cast<std::size_t>(*v) : SIZE_MAX;
    }

    const std::vector<Structure>& rule(const std::string& name, std::size_t n) {
        auto key = std::make_pair(name, n);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        std::vector<Structure> out;
        for (const auto& s : expr(g_.body(name), n)) push(out, Structure::rule(name, s));
        return memo_[key] = std::move(out);
    }

    const std::vector<Structure>& expr(const Expr& e, std::size_t n) {
        auto key = std::make_pair(&e, n);
        auto it = expr_memo_.find(key);
        if (it != expr_memo_.end()) return it->second;
        return expr_memo_[key] = build(e, n);
    }

    std::vector<Structure> build(const Expr& e, std::size_t n) {
        std::vector<Structure> out;
        if (least(e) > n) return out;
        switch (e.kind) {
            case Expr::Kind::Atom:
                if (n == 1) push(out, Structure::atom());
                break;
            case Expr::Kind::One:
                if (n == 0) push(out, Structure::one());
                break;
            case Expr::Kind::Ref: out = rule(e.name, n); break;
            case Expr::Kind::Sum:
                for (std::size_t i = 0; i < e.items.size(); ++i)
                    for (const auto& s : expr(*e.items[i], n)) push(out, Structure::choice(i, s));
                break;
            case Expr::Kind::Prod: {
                std::vector<const Expr*> factors;
                for (const auto& it : e.items) factors.push_back(it.get());
                std::vector<Structure> partial;
                tuples(factors, 0, n, partial, [&](std::vector<Structure>& t) { push(out, Structure::product(t)); });
                break;
            }
            case Expr::Kind::Op: {
                const IntegerSet card = e.card.resolve(g_.omega);
                const std::size_t unit = least(e.arg());
                if (unit == 0) throw ValidationError("operator argument admits size 0");
                std::set<std::string> keys;
                for (std::size_t m = 0; unit != SIZE_MAX && m * unit <= n; ++m) {
                    if (!card.contains(static_cast<long>(m))) continue;
                    std::vector<const Expr*> factors(m, &e.arg());
                    std::vector<Structure> partial;
                    tuples(factors, 0, n, partial, [&](std::vector<Structure>& t) {
                        Structure s = Structure::operation(e.op, t);
                        if (keys.insert(canonical_key(s)).second) push(out, std::move(s));
                    });
                }
                break;
            }
        }
        return out;
    }

    template <class Emit>
    void tuples(const std::vector<const Expr*>& factors, std::size_t i, std::size_t n, std::vector<Structure>& partial,
                Emit&& emit) {
        if (i == factors.size()) {
            if (n == 0) emit(partial);
            return;
        }
        std::size_t rest = 0;
        for (std::size_t j = i + 1; j < factors.size(); ++j) {
            std::size_t l = least(*factors[j]);
            if (l == SIZE_MAX) return;
            rest += l;
        }
        if (rest > n) return;
        for (std::size_t k = least(*factors[i]); k + rest <= n; ++k) {
            for (const auto& s : expr(*factors[i], k)) {
                partial.push_back(s);
                tuples(factors, i + 1, n - k, partial, emit);
                partial.pop_back();
            }
        }
    }

    const GrammarSystem& g_;
    std::map<std::string, Valuation> val_;
    std::size_t cap_;
    std::map<std::pair<std::string, std::size_t>, std::vector<Structure>> memo_;
    std::map<std::pair<const Expr*, std::size_t>, std::vector<Structure>> expr_memo_;
};

}  // namespace detail

/// Every structure of size n of an unlabeled grammar, each symmetry class
/// once (Set up to order, Cyc up to rotation, USeq/UCyc also up to reversal).
/// A root with several terms wraps each structure in a choice of term.
inline std::vector<Structure> enumerate_structures(const GrammarSystem& g, std::size_t n,
                                                   std::size_t cap = default_structure_cap) {
    if (g.mode == Mode::Labeled) throw ValidationError("structure enumeration needs an unlabeled grammar");
    if (g.root_has_subtraction()) throw ValidationError("structure enumeration needs a root without subtraction");
    require_valid(g);
    return detail::Enumerator(g, cap).root(n);
}

// ---------------------------------------------------------------------------
// Goodness of fit

struct ChiSquare {
    double statistic = 0;
    std::size_t dof = 0;
    double p_value = 1;
};

/// Pearson test of observed category counts against the uniform law.
inline ChiSquare chi_square_uniform(const std::vector<std::size_t>& observed) {
    ChiSquare r;
    if (observed.size() < 2) return r;
    double total = 0;
    for (auto o : observed) total += static_cast<double>(o);
    const double expected = total / static_cast<double>(observed.size());
    for (auto o : observed) {
        const double d = static_cast<double>(o) - expected;
        r.statistic += d * d / expected;
    }
    r.dof = observed.size() - 1;
    boost::math::chi_squared dist(static_cast<double>(r.dof));
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
    return r;
}

}  // namespace cactus::oracle
