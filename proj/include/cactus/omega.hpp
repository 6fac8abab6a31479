#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cactus/error.hpp"

namespace cactus {

/// A set of non-negative integers: a finite part plus an optional
/// cofinite tail {threshold, threshold+1, ...}.
struct IntegerSet {
    std::set<long> members;
    std::optional<long> threshold;

    static IntegerSet finite(std::set<long> m) { return {std::move(m), std::nullopt}; }
    static IntegerSet at_least(long k) { return {{}, k}; }

    bool contains(long m) const { return members.count(m) > 0 || (threshold && m >= *threshold); }

    bool empty() const { return members.empty() && !threshold; }

    std::optional<long> min() const {
        std::optional<long> best;
        if (!members.empty()) best = *members.begin();
        if (threshold && (!best || *threshold < *best)) best = threshold;
        return best;
    }

    /// Every element shifted by delta (elements that become negative are dropped).
    IntegerSet shifted(long delta) const {
        IntegerSet out;
        for (long m : members)
            if (m + delta >= 0) out.members.insert(m + delta);
        if (threshold) out.threshold = std::max(0L, *threshold + delta);
        return out;
    }

    /// Elements admitted up to (and including) bound, ascending.
    std::vector<long> enumerate_up_to(long bound) const {
        std::vector<long> out;
        for (long m = 0; m <= bound; ++m)
            if (contains(m)) out.push_back(m);
        return out;
    }

    std::string to_string() const {
        if (threshold && members.empty()) return ">=" + std::to_string(*threshold);
        std::string s = "{";
        bool first = true;
        for (long m : members) {
            if (!first) s += ",";
            s += std::to_string(m);
            first = false;
        }
        s += "}";
        if (threshold) s += "+>=" + std::to_string(*threshold);
        return s;
    }

    friend bool operator==(const IntegerSet&, const IntegerSet&) = default;
};

/// The set of admissible cycle sizes. Bridges count as cycles of size 2.
class OmegaSpec {
public:
    OmegaSpec() = default;
    explicit OmegaSpec(IntegerSet set) : set_(std::move(set)) {}

    static OmegaSpec finite(std::set<long> m) { return OmegaSpec(IntegerSet::finite(std::move(m))); }
    static OmegaSpec at_least(long k) { return OmegaSpec(IntegerSet::at_least(k)); }

    const IntegerSet& set() const { return set_; }
    bool contains(long m) const { return set_.contains(m); }
    bool is_finite() const { return !set_.threshold.has_value(); }

    /// Omega-1 := {x - 1 : x in Omega}.
    IntegerSet minus_one() const { return set_.shifted(-1); }

    /// Problems that make this an invalid Omega (empty list means valid).
    std::vector<std::string> diagnostics() const {
        std::vector<std::string> out;
        if (set_.empty()) out.push_back("Omega is empty");
        for (long m : set_.members)
            if (m < 2) out.push_back("Omega member " + std::to_string(m) + " is not greater than 1");
        if (set_.threshold && *set_.threshold < 2)
            out.push_back("Omega threshold " + std::to_string(*set_.threshold) + " is not greater than 1");
        return out;
    }

    void require_valid() const {
        auto d = diagnostics();
        if (!d.empty()) throw ValidationError("invalid Omega " + to_string() + ": " + d.front());
    }

    std::string to_string() const { return set_.to_string(); }

    friend bool operator==(const OmegaSpec&, const OmegaSpec&) = default;

private:
    IntegerSet set_;
};

/// Parses "{5}", "{3,5,7}" or ">=3". Syntax errors throw ValidationError;
/// semantic checks (members > 1) are left to OmegaSpec::diagnostics.
inline OmegaSpec parse_omega(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    auto parse_int = [&](const std::string& digits) -> long {
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw ValidationError("malformed Omega '" + text + "'");
        return std::stol(digits);
    };
    if (s.rfind(">=", 0) == 0) return OmegaSpec::at_least(parse_int(s.substr(2)));
    if (s.size() >= 2 && s.front() == '{' && s.back() == '}') {
        std::set<long> members;
        std::string body = s.substr(1, s.size() - 2);
        std::size_t start = 0;
        while (start <= body.size()) {
            auto comma = body.find(',', start);
            if (comma == std::string::npos) comma = body.size();
            members.insert(parse_int(body.substr(start, comma - start)));
            start = comma + 1;
        }
        return OmegaSpec::finite(std::move(members));
    }
    throw ValidationError("malformed Omega '" + text + "' (expected {a,b,...} or >=k)");
}

}  // namespace cactus
