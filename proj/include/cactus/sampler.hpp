#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "cactus/counting.hpp"
#include "cactus/error.hpp"
#include "cactus/omega.hpp"
#include "cactus/structure.hpp"

namespace cactus {

namespace detail {

/// Pascal triangle of exact binomial coefficients.
class Binomials {
public:
    explicit Binomials(std::size_t n) : rows_(n + 1) {
        for (std::size_t i = 0; i <= n; ++i) {
            rows_[i].resize(i + 1);
            rows_[i][0] = rows_[i][i] = 1;
            for (std::size_t k = 1; k < i; ++k) rows_[i][k] = rows_[i - 1][k - 1] + rows_[i - 1][k];
        }
    }
    const Integer& operator()(std::size_t n, std::size_t k) const { return rows_[n][k]; }

private:
    std::vector<std::vector<Integer>> rows_;
};

/// Counts of sequences X^m with m in a cardinality set C, as the chain
/// T_j = [j in C] + X T_{j+1} for j < J and T_J = 1 (+ X T_J when C
/// contains every m >= J). T_0 is the sequence class. With `binomials`
/// the products are labeled.
class SequenceChain {
public:
    SequenceChain(const IntegerSet& card, std::shared_ptr<const Binomials> binomials) : card_(card), binomials_(std::move(binomials)) {
        if (card.threshold) {
            top_ = *card.threshold;
            looping_ = true;
        } else if (!card.members.empty()) {
            top_ = *card.members.rbegin();
        } else {
            top_ = -1;
        }
        t_.resize(static_cast<std::size_t>(std::max(top_ + 1, 0L)));
    }

    /// Total count of the sequence class at size n.
    Integer total(std::size_t n) const { return top_ < 0 ? Integer(0) : t_[0][n]; }

    /// Appends size n to every state; x must already be known up to n.
    void extend(const std::vector<Integer>& x, std::size_t n) {
        for (long j = top_; j >= 0; --j) {
            Integer v = (n == 0 && card_.contains(j)) ? 1 : 0;
            if (j < top_ || looping_) {
                const auto& next = t_[static_cast<std::size_t>(j < top_ ? j + 1 : j)];
                for (std::size_t k = 1; k <= n; ++k) v += weight(x, next, n, k);
            }
            t_[static_cast<std::size_t>(j)].push_back(v);
        }
    }

    /// Sizes of the components of a uniformly drawn sequence of total size n.
    std::vector<std::size_t> sample(const std::vector<Integer>& x, std::size_t n, RandomSource& rng) const {
        std::vector<std::size_t> sizes;
        long j = 0;
        while (true) {
            const bool can_stop = n == 0 && card_.contains(j);
            if (n == 0) {
                if (!can_stop) throw Error("sequence chain reached an empty state");
                return sizes;
            }
            if (j == top_ && !looping_) throw Error("sequence chain reached an empty state");
            const auto& next = t_[static_cast<std::size_t>(j < top_ ? j + 1 : j)];
            std::vector<Integer> w(n);
            for (std::size_t k = 1; k <= n; ++k) w[k - 1] = weight(x, next, n, k);
            std::size_t k = rng.choose(w) + 1;
            sizes.push_back(k);
            n -= k;
            if (j < top_) ++j;
        }
    }

private:
    Integer weight(const std::vector<Integer>& x, const std::vector<Integer>& next, std::size_t n, std::size_t k) const {
        Integer w = x[k] * next[n - k];
        if (binomials_) w *= (*binomials_)(n, k);
        return w;
    }

    IntegerSet card_;
    std::shared_ptr<const Binomials> binomials_;
    long top_ = -1;
    bool looping_ = false;
    std::vector<std::vector<Integer>> t_;
};

inline void relabel(Structure& s, const std::vector<int>& perm) {
    if (s.kind == Structure::Kind::Atom && s.label > 0) s.label = perm[static_cast<std::size_t>(s.label - 1)];
    for (auto& c : s.children) relabel(c, perm);
}

inline std::vector<std::size_t> realizable_near(const std::vector<Integer>& counts, std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t m = std::min(n, counts.size() - 1) + 1; m-- > 0;)
        if (sgn(counts[m]) > 0 && m != n) {
            out.push_back(m);
            break;
        }
    for (std::size_t m = n + 1; m < counts.size(); ++m)
        if (sgn(counts[m]) > 0) {
            out.push_back(m);
            break;
        }
    return out;
}

}  // namespace detail

/// Uniform sampler for unlabeled plane rooted cacti with cycle sizes in
/// Omega, following G = Z x Cyc(>=1; B), B = Seq(in Omega-1; Q),
/// Q = Z x Seq(B). Cycles of B components are drawn as necklaces: a period
/// divisor d is chosen with weight phi(d) M_{N/d}, where
/// M_k = sum_i i B_i S_{k-i} = k [x^k] log(1/(1-B)); a sequence of total
/// size N/d whose first component is size-biased is rotated uniformly and
/// repeated d times.
class PlaneRootedSampler {
public:
    PlaneRootedSampler(const OmegaSpec& omega, std::size_t max_size)
        : omega_(omega), chain_(omega.minus_one(), nullptr) {
        omega.require_valid();
        const std::size_t top = std::max<std::size_t>(max_size, 1);
        q_.assign(1, 0);
        s_.assign(1, 1);
        b_.assign(1, 0);
        chain_.extend(q_, 0);
        b_[0] = chain_.total(0);
        for (std::size_t n = 1; n <= top; ++n) {
            q_.push_back(s_[n - 1]);
            chain_.extend(q_, n);
            b_.push_back(chain_.total(n));
            Integer s = 0;
            for (std::size_t k = 1; k <= n; ++k) s += b_[k] * s_[n - k];
            s_.push_back(s);
        }
        m_.assign(top + 1, 0);
        for (std::size_t k = 1; k <= top; ++k)
            for (std::size_t i = 1; i <= k; ++i) m_[k] += Integer(static_cast<unsigned long>(i)) * b_[i] * s_[k - i];
        g_.assign(top + 1, 0);
        for (std::size_t n = 2; n <= top; ++n) {
            const long big_n = static_cast<long>(n - 1);
            Integer total = 0;
            for (long d : divisors(big_n)) total += Integer(euler_phi(d)) * m_[static_cast<std::size_t>(big_n / d)];
            if (total % big_n != 0) throw SemanticsError("necklace count is not integral");
            g_[n] = total / big_n;
        }
    }

    std::size_t max_size() const { return g_.size() - 1; }
    const OmegaSpec& omega() const { return omega_; }
    const std::vector<Integer>& counts() const { return g_; }

    Structure sample(std::size_t n, RandomSource& rng) const {
        if (n > max_size()) throw ResourceError("counting tables only reach size " + std::to_string(max_size()));
        if (sgn(g_[n]) == 0) throw ZeroCountError("no plane rooted cactus of size " + std::to_string(n) + " with Omega=" + omega_.to_string());
        const std::size_t big_n = n - 1;
        std::vector<long> ds = divisors(static_cast<long>(big_n));
        std::vector<Integer> w;
        for (long d : ds) w.push_back(Integer(euler_phi(d)) * m_[big_n / static_cast<std::size_t>(d)]);
        const std::size_t d = static_cast<std::size_t>(ds[rng.choose(w)]);
        const std::size_t k = big_n / d;

        std::vector<Integer> first(k);
        for (std::size_t i = 1; i <= k; ++i) first[i - 1] = Integer(static_cast<unsigned long>(i)) * b_[i] * s_[k - i];
        const std::size_t i = rng.choose(first) + 1;
        std::vector<std::size_t> sizes{i};
        for (std::size_t r : sequence_sizes(k - i, rng)) sizes.push_back(r);
        std::rotate(sizes.begin(), sizes.begin() + static_cast<std::ptrdiff_t>(rng.below(sizes.size())), sizes.end());

        std::vector<Structure> period;
        for (std::size_t sz : sizes) period.push_back(polygon(sz, rng));
        std::vector<Structure> necklace;
        for (std::size_t rep = 0; rep < d; ++rep) necklace.insert(necklace.end(), period.begin(), period.end());
        std::rotate(necklace.begin(), necklace.begin() + static_cast<std::ptrdiff_t>(rng.below(necklace.size())), necklace.end());
        return Structure::rule("G", Structure::product({Structure::atom(), Structure::operation(OpKind::Cyc, std::move(necklace))}));
    }

    std::vector<std::size_t> nearest_realizable(std::size_t n) const { return detail::realizable_near(g_, n); }

private:
    /// Sizes of the B components of a uniform Seq(B) object of size n.
    std::vector<std::size_t> sequence_sizes(std::size_t n, RandomSource& rng) const {
        std::vector<std::size_t> out;
        while (n > 0) {
            std::vector<Integer> w(n);
            for (std::size_t k = 1; k <= n; ++k) w[k - 1] = b_[k] * s_[n - k];
            std::size_t k = rng.choose(w) + 1;
            out.push_back(k);
            n -= k;
        }
        return out;
    }

    Structure polygon(std::size_t n, RandomSource& rng) const {
        std::vector<Structure> items;
        for (std::size_t k : chain_.sample(q_, n, rng)) items.push_back(vertex(k, rng));
        return Structure::operation(OpKind::Seq, std::move(items));
    }

    Structure vertex(std::size_t n, RandomSource& rng) const {
        std::vector<Structure> polys;
        for (std::size_t k : sequence_sizes(n - 1, rng)) polys.push_back(polygon(k, rng));
        return Structure::rule("Q", Structure::product({Structure::atom(), Structure::operation(OpKind::Seq, std::move(polys))}));
    }

    OmegaSpec omega_;
    detail::SequenceChain chain_;
    std::vector<Integer> q_, s_, b_, m_, g_;
};

/// Uniform sampler for labeled free rooted cacti, following
/// G = Z x Set(>=1; USeq(in Omega-1; Z + G)). Sizes are drawn from labeled
/// counts with canonical positional labels, then one uniform permutation
/// relabels the whole structure. Sets are drawn component by component
/// (the component of the smallest label first); an undirected sequence of
/// length >= 2 is drawn as a uniform directed one.
class LabeledFreeRootedSampler {
public:
    LabeledFreeRootedSampler(const OmegaSpec& omega, std::size_t max_size)
        : omega_(omega), card_(omega.minus_one()), binomials_(std::make_shared<const detail::Binomials>(std::max<std::size_t>(max_size, 1))),
          long_chain_(long_part(card_), binomials_) {
        omega.require_valid();
        const std::size_t top = std::max<std::size_t>(max_size, 1);
        g_.assign(1, 0);
        h_.assign(1, 0);
        u_.assign(1, 0);
        e_.assign(1, 1);
        long_chain_.extend(h_, 0);
        for (std::size_t n = 1; n <= top; ++n) {
            g_.push_back(n >= 2 ? Integer(static_cast<unsigned long>(n)) * e_[n - 1] : Integer(0));
            h_.push_back(g_[n] + (n == 1 ? 1 : 0));
            long_chain_.extend(h_, n);
            Integer l = long_chain_.total(n);
            if (l % 2 != 0) throw SemanticsError("odd count of labeled sequences of length >= 2");
            u_.push_back((card_.contains(1) ? h_[n] : Integer(0)) + l / 2);
            Integer e = 0;
            for (std::size_t k = 1; k <= n; ++k) e += (*binomials_)(n - 1, k - 1) * u_[k] * e_[n - k];
            e_.push_back(e);
        }
    }

    std::size_t max_size() const { return g_.size() - 1; }
    const OmegaSpec& omega() const { return omega_; }
    const std::vector<Integer>& counts() const { return g_; }
    std::vector<std::size_t> nearest_realizable(std::size_t n) const { return detail::realizable_near(g_, n); }

    /// A structure whose atom labels are a permutation of 1..n.
    Structure sample(std::size_t n, RandomSource& rng) const {
        if (n > max_size()) throw ResourceError("counting tables only reach size " + std::to_string(max_size()));
        if (sgn(g_[n]) == 0) throw ZeroCountError("no labeled free rooted cactus of size " + std::to_string(n) + " with Omega=" + omega_.to_string());
        int next_label = 1;
        Structure s = rooted(n, rng, next_label);
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 1);
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(static_cast<std::uint64_t>(i))]);
        detail::relabel(s, perm);
        return s;
    }

private:
    static IntegerSet long_part(const IntegerSet& c) {
        IntegerSet out;
        for (long m : c.members)
            if (m >= 2) out.members.insert(m);
        if (c.threshold) out.threshold = std::max(2L, *c.threshold);
        return out;
    }

    Structure rooted(std::size_t n, RandomSource& rng, int& label) const {
        Structure root = Structure::atom(label++);
        std::vector<Structure> comps;
        std::size_t rest = n - 1;
        while (rest > 0) {
            std::vector<Integer> w(rest);
            for (std::size_t k = 1; k <= rest; ++k) w[k - 1] = (*binomials_)(rest - 1, k - 1) * u_[k] * e_[rest - k];
            std::size_t k = rng.choose(w) + 1;
            comps.push_back(undirected(k, rng, label));
            rest -= k;
        }
        return Structure::rule("G", Structure::product({std::move(root), Structure::operation(OpKind::Set, std::move(comps))}));
    }

    Structure undirected(std::size_t n, RandomSource& rng, int& label) const {
        Integer single = card_.contains(1) ? h_[n] : Integer(0);
        Integer longer = long_chain_.total(n) / 2;
        std::vector<Structure> items;
        if (rng.choose({single, longer}) == 0) {
            items.push_back(item(n, rng, label));
        } else {
            for (std::size_t k : long_chain_.sample(h_, n, rng)) items.push_back(item(k, rng, label));
        }
        return Structure::operation(OpKind::USeq, std::move(items));
    }

    Structure item(std::size_t n, RandomSource& rng, int& label) const {
        if (n == 1) return Structure::choice(0, Structure::atom(label++));
        return Structure::choice(1, rooted(n, rng, label));
    }

    OmegaSpec omega_;
    IntegerSet card_;
    std::shared_ptr<const detail::Binomials> binomials_;
    detail::SequenceChain long_chain_;
    std::vector<Integer> g_, h_, u_, e_;
};

inline Structure sample_plane_rooted(const OmegaSpec& omega, std::size_t n, RandomSource& rng) {
    return PlaneRootedSampler(omega, n).sample(n, rng);
}

inline Structure sample_labeled_free_rooted(const OmegaSpec& omega, std::size_t n, RandomSource& rng) {
    return LabeledFreeRootedSampler(omega, n).sample(n, rng);
}

}  // namespace cactus
