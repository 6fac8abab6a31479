#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "cactus/error.hpp"

namespace cactus {

/// Exact rational coefficient, always kept in lowest terms by GMP.
using Coefficient = mpq_class;
using Integer = mpz_class;

inline bool is_integral(const Coefficient& c) { return c.get_den() == 1; }

/// Dense formal power series truncated at a fixed order N (coefficients 0..N).
class PowerSeries {
public:
    explicit PowerSeries(std::size_t order = 0) : coeffs_(order + 1) {}

    PowerSeries(std::size_t order, std::initializer_list<Coefficient> leading) : coeffs_(order + 1) {
        std::size_t i = 0;
        for (const auto& c : leading) {
            if (i > order) break;
            coeffs_[i++] = c;
        }
    }

    PowerSeries(std::size_t order, std::vector<Coefficient> coeffs) : coeffs_(std::move(coeffs)) {
        coeffs_.resize(order + 1);
    }

    static PowerSeries zero(std::size_t order) { return PowerSeries(order); }

    static PowerSeries one(std::size_t order) {
        PowerSeries s(order);
        s.coeffs_[0] = 1;
        return s;
    }

    /// x^k (zero series if k > order).
    static PowerSeries monomial(std::size_t order, std::size_t k, const Coefficient& c = 1) {
        PowerSeries s(order);
        if (k <= order) s.coeffs_[k] = c;
        return s;
    }

    std::size_t order() const { return coeffs_.size() - 1; }
    const Coefficient& operator[](std::size_t i) const { return coeffs_[i]; }
    Coefficient& operator[](std::size_t i) { return coeffs_[i]; }
    const std::vector<Coefficient>& coefficients() const { return coeffs_; }

    /// Index of the first nonzero coefficient, or nullopt for the zero series.
    std::optional<std::size_t> valuation() const {
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (sgn(coeffs_[i]) != 0) return i;
        return std::nullopt;
    }

    bool is_zero() const { return !valuation().has_value(); }

    bool all_integral() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Coefficient& c) { return is_integral(c); });
    }

    friend bool operator==(const PowerSeries& a, const PowerSeries& b) { return a.coeffs_ == b.coeffs_; }

    std::string to_string() const {
        std::string out;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (i) out += ", ";
            out += coeffs_[i].get_str();
        }
        return "[" + out + "]";
    }

private:
    std::vector<Coefficient> coeffs_;
};

namespace detail {

inline void require_same_order(const PowerSeries& a, const PowerSeries& b) {
    if (a.order() != b.order())
        throw OrderMismatch("power series order mismatch: " + std::to_string(a.order()) + " vs " +
                            std::to_string(b.order()));
}

}  // namespace detail

inline PowerSeries add(const PowerSeries& a, const PowerSeries& b) {
    detail::require_same_order(a, b);
    PowerSeries r(a.order());
    for (std::size_t i = 0; i <= a.order(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline PowerSeries sub(const PowerSeries& a, const PowerSeries& b) {
    detail::require_same_order(a, b);
    PowerSeries r(a.order());
    for (std::size_t i = 0; i <= a.order(); ++i) r[i] = a[i] - b[i];
    return r;
}

/// Cauchy product truncated at the common order.
inline PowerSeries mul(const PowerSeries& a, const PowerSeries& b) {
    detail::require_same_order(a, b);
    const std::size_t n = a.order();
    PowerSeries r(n);
    const auto va = a.valuation();
    const auto vb = b.valuation();
    if (!va || !vb || *va + *vb > n) return r;

    // Integer fast path: accumulate numerators directly.
    if (a.all_integral() && b.all_integral()) {
        std::vector<Integer> acc(n + 1);
        for (std::size_t i = *va; i + *vb <= n; ++i) {
            const mpz_srcptr ai = a[i].get_num_mpz_t();
            if (mpz_sgn(ai) == 0) continue;
            for (std::size_t j = *vb; i + j <= n; ++j) {
                const mpz_srcptr bj = b[j].get_num_mpz_t();
                if (mpz_sgn(bj) != 0) mpz_addmul(acc[i + j].get_mpz_t(), ai, bj);
            }
        }
        for (std::size_t k = 0; k <= n; ++k) r[k] = Coefficient(acc[k]);
        return r;
    }

    Coefficient t;
    for (std::size_t i = *va; i + *vb <= n; ++i) {
        if (sgn(a[i]) == 0) continue;
        for (std::size_t j = *vb; i + j <= n; ++j) {
            if (sgn(b[j]) == 0) continue;
            mpq_mul(t.get_mpq_t(), a[i].get_mpq_t(), b[j].get_mpq_t());
            r[i + j] += t;
        }
    }
    return r;
}

enum class ArithmeticOp { Add, Sub, Mul };

inline PowerSeries arithmetic(const PowerSeries& a, const PowerSeries& b, ArithmeticOp op) {
    switch (op) {
        case ArithmeticOp::Add: return add(a, b);
        case ArithmeticOp::Sub: return sub(a, b);
        case ArithmeticOp::Mul: return mul(a, b);
    }
    return add(a, b);
}

/// a^m by binary powering; pow(a, 0) is the constant 1.
inline PowerSeries pow(const PowerSeries& a, std::size_t m) {
    PowerSeries result = PowerSeries::one(a.order());
    PowerSeries base = a;
    while (m > 0) {
        if (m & 1U) result = mul(result, base);
        m >>= 1U;
        if (m > 0) base = mul(base, base);
    }
    return result;
}

/// a(x^k): coefficient i of a moves to index i*k, truncated at the order.
inline PowerSeries substitute_power(const PowerSeries& a, std::size_t k) {
    if (k == 0) throw Error("substitute_power requires k >= 1");
    PowerSeries r(a.order());
    for (std::size_t i = 0; i * k <= a.order(); ++i) r[i * k] = a[i];
    return r;
}

inline PowerSeries scale(const PowerSeries& a, const Coefficient& c) {
    PowerSeries r(a.order());
    if (sgn(c) == 0) return r;
    for (std::size_t i = 0; i <= a.order(); ++i) r[i] = a[i] * c;
    return r;
}

inline PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) { return add(a, b); }
inline PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) { return sub(a, b); }
inline PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) { return mul(a, b); }

}  // namespace cactus
