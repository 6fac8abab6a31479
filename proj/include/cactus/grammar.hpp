#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cactus/error.hpp"
#include "cactus/omega.hpp"

namespace cactus {

enum class Mode { Unlabeled, Labeled };

inline const char* to_string(Mode m) { return m == Mode::Labeled ? "labeled" : "unlabeled"; }

/// The five decomposable-structure operators.
enum class OpKind { Seq, Set, Cyc, USeq, UCyc };

inline const char* to_string(OpKind op) {
    switch (op) {
        case OpKind::Seq: return "Seq";
        case OpKind::Set: return "Set";
        case OpKind::Cyc: return "Cyc";
        case OpKind::USeq: return "USeq";
        case OpKind::UCyc: return "UCyc";
    }
    return "?";
}

inline std::optional<OpKind> op_from_string(const std::string& s) {
    if (s == "Seq") return OpKind::Seq;
    if (s == "Set") return OpKind::Set;
    if (s == "Cyc") return OpKind::Cyc;
    if (s == "USeq") return OpKind::USeq;
    if (s == "UCyc") return OpKind::UCyc;
    return std::nullopt;
}

/// Cardinality restriction on an operator. Omega-relative kinds are
/// resolved against the system's Omega at evaluation time.
struct CardSpec {
    enum class Kind { Exactly, AtLeast, Finite, Omega, OmegaMinusOne };

    Kind kind = Kind::AtLeast;
    long value = 0;
    std::set<long> values;

    static CardSpec exactly(long m) { return {Kind::Exactly, m, {}}; }
    static CardSpec at_least(long m) { return {Kind::AtLeast, m, {}}; }
    static CardSpec finite(std::set<long> v) { return {Kind::Finite, 0, std::move(v)}; }
    static CardSpec omega() { return {Kind::Omega, 0, {}}; }
    static CardSpec omega_minus_one() { return {Kind::OmegaMinusOne, 0, {}}; }

    bool references_omega() const { return kind == Kind::Omega || kind == Kind::OmegaMinusOne; }

    IntegerSet resolve(const std::optional<OmegaSpec>& omega) const {
        switch (kind) {
            case Kind::Exactly: return IntegerSet::finite({value});
            case Kind::AtLeast: return IntegerSet::at_least(value);
            case Kind::Finite: return IntegerSet::finite(values);
            case Kind::Omega:
            case Kind::OmegaMinusOne:
                if (!omega) throw ValidationError("cardinality refers to Omega but the grammar has no @omega");
                return kind == Kind::Omega ? omega->set() : omega->minus_one();
        }
        return {};
    }

    std::string to_string() const {
        switch (kind) {
            case Kind::Exactly: return "=" + std::to_string(value);
            case Kind::AtLeast: return ">=" + std::to_string(value);
            case Kind::Finite: {
                std::string s = "in {";
                bool first = true;
                for (long v : values) {
                    if (!first) s += ",";
                    s += std::to_string(v);
                    first = false;
                }
                return s + "}";
            }
            case Kind::Omega: return "in Omega";
            case Kind::OmegaMinusOne: return "in Omega-1";
        }
        return "";
    }

    friend bool operator==(const CardSpec&, const CardSpec&) = default;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Combinatorial class expression. Children are shared and immutable.
struct Expr {
    enum class Kind { Atom, One, Ref, Sum, Prod, Op };

    Kind kind = Kind::Atom;
    std::string name;            // Ref
    std::vector<ExprPtr> items;  // Sum, Prod; Op holds its argument in items[0]
    OpKind op = OpKind::Seq;
    CardSpec card;

    const Expr& arg() const { return *items.front(); }
};

inline ExprPtr atom() { return std::make_shared<Expr>(Expr{Expr::Kind::Atom, {}, {}, OpKind::Seq, {}}); }
inline ExprPtr one() { return std::make_shared<Expr>(Expr{Expr::Kind::One, {}, {}, OpKind::Seq, {}}); }
inline ExprPtr ref(std::string name) {
    return std::make_shared<Expr>(Expr{Expr::Kind::Ref, std::move(name), {}, OpKind::Seq, {}});
}
inline ExprPtr sum(std::vector<ExprPtr> items) {
    if (items.size() == 1) return items.front();
    return std::make_shared<Expr>(Expr{Expr::Kind::Sum, {}, std::move(items), OpKind::Seq, {}});
}
inline ExprPtr prod(std::vector<ExprPtr> items) {
    if (items.size() == 1) return items.front();
    return std::make_shared<Expr>(Expr{Expr::Kind::Prod, {}, std::move(items), OpKind::Seq, {}});
}
inline ExprPtr op(OpKind kind, CardSpec card, ExprPtr arg) {
    return std::make_shared<Expr>(Expr{Expr::Kind::Op, {}, {std::move(arg)}, kind, std::move(card)});
}

inline bool equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || a.name != b.name || a.items.size() != b.items.size()) return false;
    if (a.kind == Expr::Kind::Op && (a.op != b.op || !(a.card == b.card))) return false;
    for (std::size_t i = 0; i < a.items.size(); ++i)
        if (!equal(*a.items[i], *b.items[i])) return false;
    return true;
}

/// One signed term of the root combination: coefficient times a rule, Z or 1.
struct RootTerm {
    enum class Kind { Rule, Atom, One };
    long coefficient = 1;
    Kind kind = Kind::Rule;
    std::string name;

    friend bool operator==(const RootTerm&, const RootTerm&) = default;
};

struct Rule {
    std::string name;
    ExprPtr body;
};

/// A named system of mutually recursive class definitions.
class GrammarSystem {
public:
    Mode mode = Mode::Unlabeled;
    std::optional<OmegaSpec> omega;
    std::vector<RootTerm> root;

    const std::vector<Rule>& rules() const { return rules_; }

    void add_rule(std::string name, ExprPtr body) {
        if (index_.count(name)) throw ValidationError("duplicate rule '" + name + "'");
        index_[name] = rules_.size();
        rules_.push_back({std::move(name), std::move(body)});
    }

    bool has_rule(const std::string& name) const { return index_.count(name) > 0; }

    const Expr& body(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw ValidationError("unknown rule '" + name + "'");
        return *rules_[it->second].body;
    }

    std::size_t index_of(const std::string& name) const { return index_.at(name); }

    bool root_has_subtraction() const {
        return std::any_of(root.begin(), root.end(), [](const RootTerm& t) { return t.coefficient < 0; });
    }

    friend bool operator==(const GrammarSystem& a, const GrammarSystem& b) {
        if (a.mode != b.mode || a.omega != b.omega || a.root != b.root || a.rules_.size() != b.rules_.size())
            return false;
        for (std::size_t i = 0; i < a.rules_.size(); ++i)
            if (a.rules_[i].name != b.rules_[i].name || !equal(*a.rules_[i].body, *b.rules_[i].body)) return false;
        return true;
    }

private:
    std::vector<Rule> rules_;
    std::map<std::string, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Parser

namespace detail {

struct Token {
    enum class Kind { Ident, Number, Symbol, End };
    Kind kind = Kind::End;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    std::vector<Token> tokenize() {
        std::vector<Token> out;
        while (true) {
            skip_space_and_comments();
            Token t;
            t.line = line_;
            t.column = column_;
            if (pos_ >= text_.size()) {
                out.push_back(t);
                return out;
            }
            char c = text_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                t.kind = Token::Kind::Ident;
                while (pos_ < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                    t.text += advance();
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                t.kind = Token::Kind::Number;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    t.text += advance();
            } else if (c == '>' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
                t.kind = Token::Kind::Symbol;
                t.text = ">=";
                advance();
                advance();
            } else if (std::string("=;+-*(){},@").find(c) != std::string::npos) {
                t.kind = Token::Kind::Symbol;
                t.text = std::string(1, advance());
            } else {
                throw GrammarSyntaxError(std::string("unexpected character '") + c + "'", line_, column_);
            }
            out.push_back(std::move(t));
        }
    }

private:
    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    void skip_space_and_comments() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    GrammarSystem parse() {
        GrammarSystem system;
        std::optional<std::vector<RootTerm>> root;
        std::vector<std::pair<RootTerm, Token>> root_refs;
        while (peek().kind != Token::Kind::End) {
            if (is_symbol("@")) {
                next();
                Token directive = expect_ident("directive name");
                if (directive.text == "mode") {
                    Token m = expect_ident("'labeled' or 'unlabeled'");
                    if (m.text == "labeled")
                        system.mode = Mode::Labeled;
                    else if (m.text == "unlabeled")
                        system.mode = Mode::Unlabeled;
                    else
                        fail("expected 'labeled' or 'unlabeled'", m);
                } else if (directive.text == "omega") {
                    system.omega = parse_omega_directive();
                } else if (directive.text == "root") {
                    if (root) fail("duplicate @root directive", directive);
                    root = parse_root(root_refs);
                } else {
                    fail("unknown directive '@" + directive.text + "'", directive);
                }
                expect_symbol(";");
                continue;
            }
            Token name = expect_ident("rule name");
            if (op_from_string(name.text) || name.text == "Z") fail("reserved word used as rule name", name);
            expect_symbol("=");
            ExprPtr body = parse_expr();
            if (is_symbol("-")) fail("subtraction is only allowed in the @root combination", peek());
            expect_symbol(";");
            if (system.has_rule(name.text)) fail("duplicate rule '" + name.text + "'", name);
            system.add_rule(name.text, body);
            rule_tokens_.push_back(name);
        }
        for (const auto& [name, tok] : refs_)
            if (!system.has_rule(name)) fail("unresolved reference '" + name + "'", tok);
        for (const auto& [term, tok] : root_refs)
            if (!system.has_rule(term.name)) fail("unresolved reference '" + term.name + "' in @root", tok);
        if (root) {
            system.root = *root;
        } else if (!system.rules().empty()) {
            system.root = {RootTerm{1, RootTerm::Kind::Rule, system.rules().front().name}};
        } else {
            throw GrammarSyntaxError("grammar has no rules", 1, 1);
        }
        return system;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    Token next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
    bool is_symbol(const char* s) const { return peek().kind == Token::Kind::Symbol && peek().text == s; }
    bool is_ident(const char* s) const { return peek().kind == Token::Kind::Ident && peek().text == s; }

    [[noreturn]] void fail(const std::string& what, const Token& at) const {
        throw GrammarSyntaxError(what, at.line, at.column);
    }

    Token expect_symbol(const char* s) {
        if (!is_symbol(s)) fail(std::string("expected '") + s + "'" + found(), peek());
        return next();
    }

    Token expect_ident(const char* what) {
        if (peek().kind != Token::Kind::Ident) fail(std::string("expected ") + what + found(), peek());
        return next();
    }

    long expect_number() {
        if (peek().kind != Token::Kind::Number) fail("expected a number" + found(), peek());
        return std::stol(next().text);
    }

    std::string found() const {
        return peek().kind == Token::Kind::End ? " but reached end of input" : " but found '" + peek().text + "'";
    }

    std::set<long> parse_number_set() {
        expect_symbol("{");
        std::set<long> values;
        values.insert(expect_number());
        while (is_symbol(",")) {
            next();
            values.insert(expect_number());
        }
        expect_symbol("}");
        return values;
    }

    OmegaSpec parse_omega_directive() {
        if (is_symbol(">=")) {
            next();
            return OmegaSpec::at_least(expect_number());
        }
        return OmegaSpec::finite(parse_number_set());
    }

    std::vector<RootTerm> parse_root(std::vector<std::pair<RootTerm, Token>>& refs) {
        std::vector<RootTerm> terms;
        long sign = 1;
        if (is_symbol("-")) {
            next();
            sign = -1;
        } else if (is_symbol("+")) {
            next();
        }
        while (true) {
            RootTerm term;
            term.coefficient = sign;
            Token at = peek();
            if (peek().kind == Token::Kind::Number && tokens_[pos_ + 1].kind == Token::Kind::Symbol &&
                tokens_[pos_ + 1].text == "*") {
                term.coefficient *= expect_number();
                next();
                at = peek();
            }
            if (peek().kind == Token::Kind::Number) {
                if (expect_number() != 1) fail("only the constant 1 may appear as a root term", at);
                term.kind = RootTerm::Kind::One;
            } else {
                Token name = expect_ident("rule name, Z or 1");
                if (name.text == "Z") {
                    term.kind = RootTerm::Kind::Atom;
                } else {
                    term.kind = RootTerm::Kind::Rule;
                    term.name = name.text;
                    refs.emplace_back(term, name);
                }
            }
            terms.push_back(term);
            if (is_symbol("+")) {
                sign = 1;
            } else if (is_symbol("-")) {
                sign = -1;
            } else {
                break;
            }
            next();
        }
        return terms;
    }

    ExprPtr parse_expr() {
        std::vector<ExprPtr> items{parse_term()};
        while (is_symbol("+")) {
            next();
            items.push_back(parse_term());
        }
        return sum(std::move(items));
    }

    ExprPtr parse_term() {
        std::vector<ExprPtr> items{parse_factor()};
        while (is_symbol("*")) {
            next();
            items.push_back(parse_factor());
        }
        return prod(std::move(items));
    }

    ExprPtr parse_factor() {
        const Token& t = peek();
        if (is_symbol("(")) {
            next();
            ExprPtr inner = parse_expr();
            expect_symbol(")");
            return inner;
        }
        if (t.kind == Token::Kind::Number) {
            if (t.text != "1") fail("only the constant 1 may appear in an expression", t);
            next();
            return one();
        }
        if (t.kind != Token::Kind::Ident) fail("expected an expression" + found(), t);
        Token name = next();
        if (name.text == "Z") return atom();
        if (auto kind = op_from_string(name.text)) {
            expect_symbol("(");
            CardSpec card = (*kind == OpKind::Cyc || *kind == OpKind::UCyc) ? CardSpec::at_least(1)
                                                                            : CardSpec::at_least(0);
            if (starts_card()) {
                card = parse_card();
                expect_symbol(";");
            }
            ExprPtr arg = parse_expr();
            expect_symbol(")");
            return op(*kind, card, arg);
        }
        refs_.emplace_back(name.text, name);
        return ref(name.text);
    }

    bool starts_card() const { return is_symbol("=") || is_symbol(">=") || is_ident("in"); }

    CardSpec parse_card() {
        if (is_symbol("=")) {
            next();
            return CardSpec::exactly(expect_number());
        }
        if (is_symbol(">=")) {
            next();
            return CardSpec::at_least(expect_number());
        }
        next();  // in
        if (is_symbol("{")) return CardSpec::finite(parse_number_set());
        Token w = expect_ident("'Omega' or a {set}");
        if (w.text != "Omega") fail("expected 'Omega'", w);
        if (is_symbol("-")) {
            next();
            Token one_tok = peek();
            if (expect_number() != 1) fail("only 'Omega-1' is supported", one_tok);
            return CardSpec::omega_minus_one();
        }
        return CardSpec::omega();
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::vector<std::pair<std::string, Token>> refs_;
    std::vector<Token> rule_tokens_;
};

}  // namespace detail

/// Parses the grammar DSL:
///
///     # comment
///     @mode unlabeled;
///     @omega {5};
///     @root T_S + T_P - T_SP;
///     P = Seq(in Omega-1; Z + S_X);
///
/// Operators take an optional cardinality (`=k`, `>=k`, `in {a,b}`,
/// `in Omega`, `in Omega-1`); the default is `>=0`, or `>=1` for Cyc/UCyc.
/// Without @root the first rule is the root.
inline GrammarSystem parse_grammar(const std::string& text) {
    detail::Lexer lexer(text);
    detail::Parser parser(lexer.tokenize());
    return parser.parse();
}

// ---------------------------------------------------------------------------
// Printer

namespace detail {

inline void print_expr(const Expr& e, std::ostream& out, int context) {
    // context: 0 = top/argument, 1 = inside Sum, 2 = inside Prod
    switch (e.kind) {
        case Expr::Kind::Atom: out << "Z"; return;
        case Expr::Kind::One: out << "1"; return;
        case Expr::Kind::Ref: out << e.name; return;
        case Expr::Kind::Sum: {
            bool paren = context != 0;
            if (paren) out << "(";
            for (std::size_t i = 0; i < e.items.size(); ++i) {
                if (i) out << " + ";
                print_expr(*e.items[i], out, 1);
            }
            if (paren) out << ")";
            return;
        }
        case Expr::Kind::Prod: {
            bool paren = context == 2;
            if (paren) out << "(";
            for (std::size_t i = 0; i < e.items.size(); ++i) {
                if (i) out << " * ";
                print_expr(*e.items[i], out, 2);
            }
            if (paren) out << ")";
            return;
        }
        case Expr::Kind::Op:
            out << to_string(e.op) << "(" << e.card.to_string() << "; ";
            print_expr(e.arg(), out, 0);
            out << ")";
            return;
    }
}

}  // namespace detail

inline std::string to_string(const Expr& e) {
    std::ostringstream out;
    detail::print_expr(e, out, 0);
    return out.str();
}

inline std::string root_to_string(const std::vector<RootTerm>& root) {
    std::string out;
    for (std::size_t i = 0; i < root.size(); ++i) {
        const RootTerm& t = root[i];
        long c = t.coefficient;
        if (i == 0) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        long mag = c < 0 ? -c : c;
        if (mag != 1) out += std::to_string(mag) + "*";
        out += t.kind == RootTerm::Kind::Rule ? t.name : (t.kind == RootTerm::Kind::Atom ? "Z" : "1");
    }
    return out;
}

/// Grammar source that parses back to an identical system.
inline std::string print_grammar(const GrammarSystem& g) {
    std::ostringstream out;
    out << "@mode " << to_string(g.mode) << ";\n";
    if (g.omega) out << "@omega " << g.omega->to_string() << ";\n";
    out << "@root " << root_to_string(g.root) << ";\n";
    for (const auto& rule : g.rules()) out << rule.name << " = " << to_string(*rule.body) << ";\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Valuation and validation

/// Minimum object size of a class; nullopt stands for infinity (empty class).
using Valuation = std::optional<long>;

namespace detail {

inline Valuation add_val(Valuation a, Valuation b) {
    if (!a || !b) return std::nullopt;
    return *a + *b;
}

inline Valuation min_val(Valuation a, Valuation b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
}

inline Valuation op_valuation(const IntegerSet& card, Valuation arg) {
    auto least = card.min();
    if (!least) return std::nullopt;
    if (!arg) return card.contains(0) ? Valuation(0) : std::nullopt;
    return *least * *arg;
}

inline IntegerSet resolve_or_empty(const CardSpec& card, const std::optional<OmegaSpec>& omega) {
    if (card.references_omega() && !omega) return {};
    return card.resolve(omega);
}

}  // namespace detail

inline Valuation expression_valuation(const Expr& e, const std::map<std::string, Valuation>& rules,
                                      const std::optional<OmegaSpec>& omega) {
    switch (e.kind) {
        case Expr::Kind::Atom: return 1;
        case Expr::Kind::One: return 0;
        case Expr::Kind::Ref: return rules.at(e.name);
        case Expr::Kind::Sum: {
            Valuation v = std::nullopt;
            for (const auto& item : e.items) v = detail::min_val(v, expression_valuation(*item, rules, omega));
            return v;
        }
        case Expr::Kind::Prod: {
            Valuation v = 0;
            for (const auto& item : e.items) v = detail::add_val(v, expression_valuation(*item, rules, omega));
            return v;
        }
        case Expr::Kind::Op:
            return detail::op_valuation(detail::resolve_or_empty(e.card, omega),
                                        expression_valuation(e.arg(), rules, omega));
    }
    return std::nullopt;
}

/// Least fixed point of the valuation equations, iterated down from infinity.
inline std::map<std::string, Valuation> valuation(const GrammarSystem& g) {
    std::map<std::string, Valuation> val;
    for (const auto& rule : g.rules()) val[rule.name] = std::nullopt;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& rule : g.rules()) {
            Valuation v = expression_valuation(*rule.body, val, g.omega);
            if (v != val[rule.name]) {
                val[rule.name] = v;
                changed = true;
            }
        }
    }
    return val;
}

inline Valuation root_valuation(const GrammarSystem& g, const std::map<std::string, Valuation>& val) {
    Valuation v = std::nullopt;
    for (const auto& t : g.root) {
        Valuation tv = t.kind == RootTerm::Kind::Rule ? val.at(t.name) : Valuation(t.kind == RootTerm::Kind::Atom ? 1 : 0);
        v = detail::min_val(v, tv);
    }
    return v;
}

namespace detail {

inline void check_operators(const Expr& e, const std::string& rule, const std::map<std::string, Valuation>& val,
                            const std::optional<OmegaSpec>& omega, std::vector<std::string>& out) {
    if (e.kind == Expr::Kind::Op) {
        Valuation arg = expression_valuation(e.arg(), val, omega);
        std::string where = std::string(to_string(e.op)) + "(" + e.card.to_string() + "; ...) in rule " + rule;
        if (!arg)
            out.push_back("argument of " + where + " is an empty class");
        else if (*arg == 0)
            out.push_back("argument of " + where + " has valuation 0 (it contains an object of size 0)");
        if ((e.op == OpKind::Cyc || e.op == OpKind::UCyc) && (!e.card.references_omega() || omega)) {
            if (e.card.resolve(omega).contains(0)) out.push_back(where + " admits cardinality 0");
        }
    }
    for (const auto& item : e.items) check_operators(*item, rule, val, omega, out);
}

/// Rules reachable from e without consuming an atom.
inline void zero_cost_refs(const Expr& e, const std::map<std::string, Valuation>& val,
                           const std::optional<OmegaSpec>& omega, std::set<std::string>& out) {
    switch (e.kind) {
        case Expr::Kind::Atom:
        case Expr::Kind::One: return;
        case Expr::Kind::Ref: out.insert(e.name); return;
        case Expr::Kind::Sum:
            for (const auto& item : e.items) zero_cost_refs(*item, val, omega, out);
            return;
        case Expr::Kind::Prod:
            for (std::size_t i = 0; i < e.items.size(); ++i) {
                bool others_free = true;
                for (std::size_t j = 0; j < e.items.size(); ++j)
                    if (j != i && expression_valuation(*e.items[j], val, omega) != Valuation(0)) others_free = false;
                if (others_free) zero_cost_refs(*e.items[i], val, omega, out);
            }
            return;
        case Expr::Kind::Op:
            if (resolve_or_empty(e.card, omega).contains(1)) zero_cost_refs(e.arg(), val, omega, out);
            return;
    }
}

}  // namespace detail

/// Static checks; an empty result means the system is valid.
inline std::vector<std::string> validate(const GrammarSystem& g) {
    std::vector<std::string> out;
    bool needs_omega = false;
    std::function<void(const Expr&)> scan = [&](const Expr& e) {
        if (e.kind == Expr::Kind::Op && e.card.references_omega()) needs_omega = true;
        for (const auto& item : e.items) scan(*item);
    };
    for (const auto& rule : g.rules()) scan(*rule.body);
    if (needs_omega && !g.omega) out.push_back("cardinality refers to Omega but the grammar has no @omega directive");
    if (g.omega)
        for (auto& d : g.omega->diagnostics()) out.push_back(d);

    auto val = valuation(g);
    for (const auto& rule : g.rules())
        if (!val[rule.name]) out.push_back("rule " + rule.name + " generates no object (valuation is infinite)");
    for (const auto& rule : g.rules()) detail::check_operators(*rule.body, rule.name, val, g.omega, out);

    // A rule that can reach itself without consuming an atom has infinitely
    // many objects of some size.
    std::map<std::string, std::set<std::string>> graph;
    for (const auto& rule : g.rules()) detail::zero_cost_refs(*rule.body, val, g.omega, graph[rule.name]);
    std::map<std::string, int> state;
    std::set<std::string> reported;
    std::function<bool(const std::string&)> dfs = [&](const std::string& r) {
        state[r] = 1;
        for (const auto& s : graph[r]) {
            if (state[s] == 1) return true;
            if (state[s] == 0 && dfs(s)) return true;
        }
        state[r] = 2;
        return false;
    };
    for (const auto& rule : g.rules()) {
        if (state[rule.name] == 0 && dfs(rule.name)) {
            out.push_back("rule " + rule.name + " is not well-founded: a reference cycle consumes no atom");
            break;
        }
    }
    return out;
}

inline void require_valid(const GrammarSystem& g) {
    auto d = validate(g);
    if (!d.empty()) throw ValidationError("invalid grammar: " + d.front());
}

}  // namespace cactus
