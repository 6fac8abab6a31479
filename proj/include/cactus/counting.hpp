#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "cactus/error.hpp"
#include "cactus/grammar.hpp"
#include "cactus/omega.hpp"
#include "cactus/series.hpp"

namespace cactus {

inline long euler_phi(long n) {
    long result = n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

inline std::vector<long> divisors(long n) {
    std::vector<long> small, large;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            small.push_back(d);
            if (d != n / d) large.push_back(n / d);
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

inline Integer factorial(long n) {
    Integer r = 1;
    for (long i = 2; i <= n; ++i) r *= i;
    return r;
}

/// Powers and plethystic substitutions of one argument series, shared by
/// all cardinalities of a restricted operator.
class OperatorContext {
public:
    OperatorContext(const PowerSeries& a, Mode mode) : a_(a), mode_(mode) {
        if (sgn(a[0]) != 0) throw ValidationError("operator argument has a nonzero constant term");
        powers_.push_back(PowerSeries::one(a.order()));
    }

    std::size_t order() const { return a_.order(); }

    /// Largest m for which A^m can be nonzero below the truncation order.
    long max_cardinality() const {
        auto v = a_.valuation();
        if (!v) return 0;
        return static_cast<long>(order() / *v);
    }

    const PowerSeries& power(std::size_t j) {
        while (powers_.size() <= j) powers_.push_back(mul(powers_.back(), a_));
        return powers_[j];
    }

    /// A(x^d)^j, computed as (A^j)(x^d).
    PowerSeries substituted_power(std::size_t d, std::size_t j) {
        if (j * d > order() && j > 0) return PowerSeries(order());
        return substitute_power(power(j), d);
    }

    PowerSeries apply(OpKind op, long m) {
        if (m < 0) throw Error("negative cardinality");
        if ((op == OpKind::Cyc || op == OpKind::UCyc) && m == 0)
            throw Error(std::string(to_string(op)) + " requires cardinality at least 1");
        return mode_ == Mode::Labeled ? labeled(op, m) : unlabeled(op, m);
    }

private:
    PowerSeries labeled(OpKind op, long m) {
        const PowerSeries& am = power(m);
        switch (op) {
            case OpKind::Seq: return am;
            case OpKind::Set: return scale(am, Coefficient(1, factorial(m)));
            case OpKind::Cyc: return scale(am, Coefficient(1, m));
            case OpKind::USeq: return m >= 2 ? scale(am, Coefficient(1, 2)) : am;
            case OpKind::UCyc:
                if (m >= 3) return scale(am, Coefficient(1, 2 * m));
                if (m == 2) return scale(am, Coefficient(1, 2));
                return am;
        }
        return am;
    }

    PowerSeries unlabeled(OpKind op, long m) {
        switch (op) {
            case OpKind::Seq: return power(m);
            case OpKind::Set: return multiset(m);
            case OpKind::Cyc: return cycle(m);
            case OpKind::USeq: {
                if (m <= 1) return power(m);
                PowerSeries sym = m % 2 == 0 ? substituted_power(2, m / 2) : mul(a_, substituted_power(2, (m - 1) / 2));
                return scale(add(power(m), sym), Coefficient(1, 2));
            }
            case OpKind::UCyc: {
                if (m == 1) return a_;
                if (m == 2) return multiset(2);
                PowerSeries half = scale(cycle(m), Coefficient(1, 2));
                if (m % 2 == 0) {
                    PowerSeries refl = add(substituted_power(2, m / 2), mul(power(2), substituted_power(2, (m - 2) / 2)));
                    return add(half, scale(refl, Coefficient(1, 4)));
                }
                return add(half, scale(mul(a_, substituted_power(2, (m - 1) / 2)), Coefficient(1, 2)));
            }
        }
        return power(m);
    }

    PowerSeries cycle(long m) {
        PowerSeries r(order());
        for (long d : divisors(m)) {
            PowerSeries term = substituted_power(d, m / d);
            if (!term.is_zero()) r = add(r, scale(term, euler_phi(d)));
        }
        return scale(r, Coefficient(1, m));
    }

    /// Newton recurrence h_m = (1/m) sum_{k=1..m} A(x^k) h_{m-k}.
    PowerSeries multiset(long m) {
        if (sets_.empty()) sets_.push_back(PowerSeries::one(order()));
        while (static_cast<long>(sets_.size()) <= m) {
            long j = static_cast<long>(sets_.size());
            while (static_cast<long>(plethysms_.size()) < j) plethysms_.push_back(substitute_power(a_, plethysms_.size() + 1));
            PowerSeries h(order());
            for (long k = 1; k <= j; ++k) {
                const PowerSeries& pk = plethysms_[k - 1];
                const PowerSeries& prev = sets_[j - k];
                if (pk.is_zero() || prev.is_zero()) continue;
                h = add(h, mul(pk, prev));
            }
            sets_.push_back(scale(h, Coefficient(1, j)));
        }
        return sets_[m];
    }

    const PowerSeries& a_;
    Mode mode_;
    std::vector<PowerSeries> powers_;
    std::vector<PowerSeries> plethysms_;
    std::vector<PowerSeries> sets_;
};

/// The operator with exactly m components applied to A.
inline PowerSeries operator_series(OpKind op, long m, const PowerSeries& a, Mode mode) {
    OperatorContext ctx(a, mode);
    return ctx.apply(op, m);
}

/// Sum of operator_series over the admitted cardinalities m <= N.
inline PowerSeries restricted_operator(OpKind op, const IntegerSet& card, const PowerSeries& a, Mode mode) {
    OperatorContext ctx(a, mode);
    PowerSeries r(a.order());
    const long top = ctx.max_cardinality();
    for (long m = (op == OpKind::Cyc || op == OpKind::UCyc) ? 1 : 0; m <= top; ++m)
        if (card.contains(m)) r = add(r, ctx.apply(op, m));
    if ((op == OpKind::Cyc || op == OpKind::UCyc) && card.contains(0))
        throw Error(std::string(to_string(op)) + " requires cardinality at least 1");
    return r;
}

inline PowerSeries restricted_operator(OpKind op, const CardSpec& card, const PowerSeries& a, Mode mode,
                                       const std::optional<OmegaSpec>& omega = std::nullopt) {
    return restricted_operator(op, card.resolve(omega), a, mode);
}

struct SeriesEnvironment {
    std::size_t order = 0;
    Mode mode = Mode::Unlabeled;
    std::map<std::string, PowerSeries> rules;
    PowerSeries root;
    std::size_t sweeps = 0;
    bool converged = false;
};

inline PowerSeries evaluate_expression(const Expr& e, const std::map<std::string, PowerSeries>& env, std::size_t order,
                                       Mode mode, const std::optional<OmegaSpec>& omega) {
    switch (e.kind) {
        case Expr::Kind::Atom: return PowerSeries::monomial(order, 1);
        case Expr::Kind::One: return PowerSeries::one(order);
        case Expr::Kind::Ref: return env.at(e.name);
        case Expr::Kind::Sum: {
            PowerSeries r(order);
            for (const auto& item : e.items) r = add(r, evaluate_expression(*item, env, order, mode, omega));
            return r;
        }
        case Expr::Kind::Prod: {
            PowerSeries r = PowerSeries::one(order);
            for (const auto& item : e.items) {
                r = mul(r, evaluate_expression(*item, env, order, mode, omega));
                if (r.is_zero()) break;
            }
            return r;
        }
        case Expr::Kind::Op:
            return restricted_operator(e.op, e.card.resolve(omega),
                                       evaluate_expression(e.arg(), env, order, mode, omega), mode);
    }
    return PowerSeries(order);
}

/// Solves the system by Gauss-Seidel sweeps from the zero assignment.
/// `evaluation_order` permutes the rule visiting order (default: declaration order).
inline SeriesEnvironment evaluate(const GrammarSystem& g, std::size_t order,
                                  std::vector<std::string> evaluation_order = {}) {
    require_valid(g);
    if (evaluation_order.empty())
        for (const auto& rule : g.rules()) evaluation_order.push_back(rule.name);
    if (evaluation_order.size() != g.rules().size())
        throw Error("evaluation order must list every rule exactly once");

    SeriesEnvironment env;
    env.order = order;
    env.mode = g.mode;
    for (const auto& rule : g.rules()) env.rules.emplace(rule.name, PowerSeries(order));

    // Each sweep fixes at least one more coefficient of some rule.
    const std::size_t cap = (order + 2) * (g.rules().size() + 1);
    while (env.sweeps < cap) {
        ++env.sweeps;
        bool changed = false;
        for (const auto& name : evaluation_order) {
            PowerSeries next = evaluate_expression(g.body(name), env.rules, order, g.mode, g.omega);
            PowerSeries& current = env.rules.at(name);
            if (!(next == current)) {
                current = std::move(next);
                changed = true;
            }
        }
        if (!changed) {
            env.converged = true;
            break;
        }
    }
    if (!env.converged)
        throw IllFoundedError("fixed-point iteration did not stabilise after " + std::to_string(cap) + " sweeps");

    env.root = PowerSeries(order);
    for (const auto& t : g.root) {
        PowerSeries s = t.kind == RootTerm::Kind::Rule ? env.rules.at(t.name)
                        : t.kind == RootTerm::Kind::Atom ? PowerSeries::monomial(order, 1)
                                                         : PowerSeries::one(order);
        env.root = add(env.root, scale(s, t.coefficient));
    }

    if (g.mode == Mode::Unlabeled) {
        for (const auto& [name, s] : env.rules) {
            for (std::size_t n = 0; n <= order; ++n) {
                if (!is_integral(s[n]) || sgn(s[n]) < 0)
                    throw SemanticsError("rule " + name + " has coefficient " + s[n].get_str() + " at n=" +
                                         std::to_string(n) + " (expected a non-negative integer)");
            }
        }
    }
    for (std::size_t n = 0; n <= order; ++n) {
        Coefficient c = env.root[n];
        if (g.mode == Mode::Labeled) c *= Coefficient(factorial(static_cast<long>(n)));
        if (!is_integral(c) || sgn(c) < 0)
            throw SemanticsError("root count at n=" + std::to_string(n) + " is " + c.get_str() +
                                 " (expected a non-negative integer)");
    }
    return env;
}

/// Root counting sequence c_0..c_N (labeled mode: EGF coefficient times n!).
inline std::vector<Integer> counts(const SeriesEnvironment& env) {
    std::vector<Integer> out;
    out.reserve(env.order + 1);
    Integer fact = 1;
    for (std::size_t n = 0; n <= env.order; ++n) {
        if (n > 0) fact *= static_cast<unsigned long>(n);
        Coefficient c = env.root[n];
        if (env.mode == Mode::Labeled) c *= Coefficient(fact);
        out.push_back(c.get_num());
    }
    return out;
}

}  // namespace cactus
