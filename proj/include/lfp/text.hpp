#pragma once

// Concrete syntax for programs and models.
//
//   program  := universe (decl | fact)* layer+
//   universe := "universe" ( "{" atom ("," atom)* "}" | int ".." int ) ";"
//   decl     := "rel" NAME "/" ARITY ";"
//             | "fun" NAME "/" ARITY ( "{" entry ("," entry)* "}" )? ";"
//   entry    := ( atom | "(" atoms? ")" ) "->" atom
//   fact     := "fact" NAME "(" atoms? ")" "."
//   layer    := ("define" | "constrain") "{" expr ("," expr)* "}"
//
// Inside a layer `!` binds tighter than `&`, then `|`, then `=>`. A
// quantifier `forall x:` / `exists x:` extends to the next unbalanced `)`,
// top-level `,` or the end of the block. In a define block a bare `R(u)`
// abbreviates `true => R(u)`; in a constrain block `!R(u)` abbreviates
// `R(u) => false`. Comments run from `#` or `//` to the end of the line.

#include <cctype>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lfp/model.hpp"

namespace lfp {

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what), line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

namespace text {

struct Token {
    enum class Kind { Ident, Int, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;
};

inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    static const char* const multi[] = {"=>", "..", "->", "//"};
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#' || src.substr(i, 2) == "//") {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.column = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
                ++j;
            t.kind = Token::Kind::Ident;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                   (c == '-' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t j = i + 1;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            t.kind = Token::Kind::Int;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else {
            t.kind = Token::Kind::Punct;
            std::size_t len = 1;
            for (const char* m : multi) {
                if (src.substr(i, 2) == m) len = 2;
            }
            t.text = std::string(src.substr(i, len));
            if (len == 1 && std::string_view("{}(),;:./&|!=").find(c) == std::string_view::npos)
                throw ParseError(line, col, std::string("unexpected character '") + c + "'");
            advance(len);
        }
        out.push_back(std::move(t));
    }
    out.push_back(Token{Token::Kind::End, "", line, col});
    return out;
}

/// Parse tree of a layer expression before it is classified into clause
/// bodies and conditions.
struct Expr {
    enum class Kind { Atom, Not, And, Or, Implies, Forall, Exists, True, False };
    struct RawTerm {
        std::string name;
        bool call = false;
        std::vector<RawTerm> args;
        std::size_t line = 0, column = 0;
    };

    Kind kind = Kind::True;
    std::string name;
    std::vector<RawTerm> args;
    std::vector<Expr> children;
    std::size_t line = 0, column = 0;
};

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

    LayeredFormula program() {
        LayeredFormula f;
        expect_ident("universe");
        f.universe = universe();
        while (peek_ident("rel") || peek_ident("fun") || peek_ident("fact")) {
            if (accept_ident("rel")) {
                auto name = declared_name();
                expect("/");
                auto ar = arity();
                expect(";");
                if (f.relations.contains(name)) fail("relation '" + name + "' declared twice");
                f.relations[name] = ar;
            } else if (accept_ident("fun")) {
                function_decl(f);
            } else {
                accept_ident("fact");
                const auto& at = peek();
                auto name = ident("relation name");
                if (!f.relations.contains(name)) fail_at(at, "fact for undeclared relation '" + name + "'");
                Tuple t = atom_list(f.universe);
                expect(".");
                if (t.size() != f.relations[name])
                    fail_at(at, "fact for '" + name + "' has " + std::to_string(t.size()) + " arguments, expected " +
                                    std::to_string(f.relations[name]));
                f.facts.insert(name, std::move(t));
            }
        }
        while (peek_ident("define") || peek_ident("constrain")) f.layers.push_back(layer(f));
        if (f.layers.empty()) fail("expected at least one 'define' or 'constrain' layer");
        if (peek().kind != Token::Kind::End) fail("unexpected '" + peek().text + "'");
        validate(f);
        return f;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    [[noreturn]] void fail_at(const Token& t, const std::string& what) const { throw ParseError(t.line, t.column, what); }
    [[noreturn]] void fail(const std::string& what) const { fail_at(peek(), what); }

    bool peek_punct(std::string_view p) const { return peek().kind == Token::Kind::Punct && peek().text == p; }
    bool peek_ident(std::string_view w) const { return peek().kind == Token::Kind::Ident && peek().text == w; }
    bool accept(std::string_view p) {
        if (!peek_punct(p)) return false;
        next();
        return true;
    }
    bool accept_ident(std::string_view w) {
        if (!peek_ident(w)) return false;
        next();
        return true;
    }
    void expect(std::string_view p) {
        if (!accept(p)) fail("expected '" + std::string(p) + "' but found '" + describe(peek()) + "'");
    }
    void expect_ident(std::string_view w) {
        if (!accept_ident(w)) fail("expected '" + std::string(w) + "' but found '" + describe(peek()) + "'");
    }
    static std::string describe(const Token& t) { return t.kind == Token::Kind::End ? "end of input" : t.text; }

    std::string ident(const char* what) {
        if (peek().kind != Token::Kind::Ident) fail(std::string("expected ") + what + " but found '" + describe(peek()) + "'");
        if (is_reserved(peek().text)) fail("identifier '" + peek().text + "' uses the reserved prefix '__'");
        return next().text;
    }

    std::string declared_name() {
        static const char* const keywords[] = {"universe", "rel", "fun", "fact", "define", "constrain",
                                               "forall", "exists", "true", "false"};
        for (const char* k : keywords) {
            if (peek_ident(k)) fail(std::string("'") + k + "' is a keyword");
        }
        return ident("name");
    }

    std::size_t arity() {
        if (peek().kind != Token::Kind::Int || peek().text[0] == '-') fail("expected arity");
        return static_cast<std::size_t>(std::stoul(next().text));
    }

    Universe universe() {
        if (peek().kind == Token::Kind::Int) {
            long lo = std::stol(next().text);
            expect("..");
            if (peek().kind != Token::Kind::Int) fail("expected integer upper bound");
            long hi = std::stol(next().text);
            expect(";");
            if (hi < lo) fail("empty universe range");
            try {
                return Universe::range(lo, hi);
            } catch (const SignatureError& e) {
                fail(e.what());
            }
        }
        expect("{");
        std::vector<std::string> names;
        do {
            if (peek().kind != Token::Kind::Ident) fail("expected atom name");
            names.push_back(ident("atom name"));
        } while (accept(","));
        expect("}");
        expect(";");
        try {
            return Universe::symbolic(std::move(names));
        } catch (const SignatureError& e) {
            fail(e.what());
        }
    }

    AtomId atom(const Universe& u) {
        const Token& t = peek();
        if (t.kind != Token::Kind::Ident && t.kind != Token::Kind::Int) fail("expected atom");
        auto a = u.find(t.text);
        if (!a) fail("'" + t.text + "' is not an atom of the universe");
        next();
        return *a;
    }

    Tuple atom_list(const Universe& u) {
        Tuple t;
        expect("(");
        if (!peek_punct(")")) {
            do t.push_back(atom(u));
            while (accept(","));
        }
        expect(")");
        return t;
    }

    void function_decl(LayeredFormula& f) {
        const Token& at = peek();
        auto name = declared_name();
        expect("/");
        auto ar = arity();
        if (f.functions.tables().contains(name)) fail_at(at, "function '" + name + "' declared twice");
        if (accept(";")) {
            if (!(f.universe.is_integer() && FunctionEnv::is_builtin(name) && ar == 2))
                fail_at(at, "function '" + name + "' needs a table (only add/sub on integer universes are built in)");
            return;
        }
        FunctionEnv::Table table;
        table.arity = ar;
        expect("{");
        if (!peek_punct("}")) {
            do {
                Tuple args;
                if (peek_punct("(")) args = atom_list(f.universe);
                else args.push_back(atom(f.universe));
                if (args.size() != ar) fail("table entry has " + std::to_string(args.size()) + " arguments, expected " + std::to_string(ar));
                expect("->");
                auto r = atom(f.universe);
                if (!table.entries.emplace(std::move(args), r).second) fail("duplicate table entry");
            } while (accept(","));
        }
        expect("}");
        expect(";");
        f.functions.define(name, std::move(table));
    }

    // -- layer expressions --------------------------------------------------

    Clause layer(const LayeredFormula& f) {
        const bool define = next().text == "define";
        const Token& open = peek();
        expect("{");
        if (peek_punct("}")) fail_at(open, "a layer must contain at least one clause");
        std::vector<Body> parts;
        do {
            Expr e = expr();
            std::vector<std::string> scope;
            parts.push_back(define ? to_def(e, f, scope) : to_con(e, f, scope));
        } while (accept(","));
        expect("}");
        Body b = conj_all(std::move(parts));
        return define ? Clause::define(std::move(b)) : Clause::constrain(std::move(b));
    }

    Expr make(Expr::Kind k, const Token& at) {
        Expr e;
        e.kind = k;
        e.line = at.line;
        e.column = at.column;
        return e;
    }

    Expr expr() {
        Expr lhs = disjunction();
        if (peek_punct("=>")) {
            const Token& at = next();
            Expr e = make(Expr::Kind::Implies, at);
            e.children.push_back(std::move(lhs));
            e.children.push_back(disjunction());
            if (peek_punct("=>")) fail("'=>' does not chain; use parentheses");
            return e;
        }
        return lhs;
    }

    Expr disjunction() {
        Expr lhs = conjunction();
        while (peek_punct("|")) {
            const Token& at = next();
            Expr e = make(Expr::Kind::Or, at);
            e.children.push_back(std::move(lhs));
            e.children.push_back(conjunction());
            lhs = std::move(e);
        }
        return lhs;
    }

    Expr conjunction() {
        Expr lhs = unary();
        while (peek_punct("&")) {
            const Token& at = next();
            Expr e = make(Expr::Kind::And, at);
            e.children.push_back(std::move(lhs));
            e.children.push_back(unary());
            lhs = std::move(e);
        }
        return lhs;
    }

    Expr unary() {
        if (peek_punct("!")) {
            const Token& at = next();
            Expr e = make(Expr::Kind::Not, at);
            e.children.push_back(unary());
            return e;
        }
        return primary();
    }

    Expr primary() {
        const Token& at = peek();
        if (accept("(")) {
            Expr e = expr();
            expect(")");
            return e;
        }
        if (peek_ident("forall") || peek_ident("exists")) {
            const bool all = next().text == "forall";
            Expr e = make(all ? Expr::Kind::Forall : Expr::Kind::Exists, at);
            e.name = ident("variable name");
            expect(":");
            e.children.push_back(expr());
            return e;
        }
        if (accept_ident("true")) return make(Expr::Kind::True, at);
        if (accept_ident("false")) return make(Expr::Kind::False, at);
        if (peek().kind != Token::Kind::Ident) fail("expected a query or assertion but found '" + describe(peek()) + "'");
        Expr e = make(Expr::Kind::Atom, at);
        e.name = ident("relation name");
        expect("(");
        if (!peek_punct(")")) {
            do e.args.push_back(raw_term());
            while (accept(","));
        }
        expect(")");
        return e;
    }

    Expr::RawTerm raw_term() {
        const Token& at = peek();
        Expr::RawTerm t;
        t.line = at.line;
        t.column = at.column;
        if (at.kind == Token::Kind::Int) {
            t.name = next().text;
            return t;
        }
        t.name = ident("term");
        if (accept("(")) {
            t.call = true;
            if (!peek_punct(")")) {
                do t.args.push_back(raw_term());
                while (accept(","));
            }
            expect(")");
        }
        return t;
    }

    // -- classification -----------------------------------------------------

    [[noreturn]] static void fail_expr(const Expr& e, const std::string& what) { throw ParseError(e.line, e.column, what); }

    static Term to_term(const Expr::RawTerm& t, const LayeredFormula& f, const std::vector<std::string>& scope) {
        if (t.call) {
            std::vector<Term> args;
            for (const auto& a : t.args) args.push_back(to_term(a, f, scope));
            return Term::apply(t.name, std::move(args));
        }
        if (std::find(scope.begin(), scope.end(), t.name) != scope.end()) return Term::var(t.name);
        if (auto a = f.universe.find(t.name)) return Term::constant(*a);
        if (auto ar = f.functions.arity(t.name, f.universe); ar && *ar == 0) return Term::apply(t.name, {});
        throw ParseError(t.line, t.column, "unknown identifier '" + t.name + "' (not a bound variable, atom or constant)");
    }

    static std::vector<Term> to_terms(const Expr& e, const LayeredFormula& f, const std::vector<std::string>& scope) {
        std::vector<Term> out;
        for (const auto& a : e.args) out.push_back(to_term(a, f, scope));
        return out;
    }

    static void check_relation(const Expr& e, const LayeredFormula& f) {
        auto it = f.relations.find(e.name);
        if (it == f.relations.end()) fail_expr(e, "undeclared relation '" + e.name + "'");
        if (it->second != e.args.size())
            fail_expr(e, "relation '" + e.name + "' has arity " + std::to_string(it->second) + " but is used with " +
                             std::to_string(e.args.size()) + " arguments");
    }

    static Assertion to_assertion(const Expr& e, const LayeredFormula& f, const std::vector<std::string>& scope) {
        if (e.kind != Expr::Kind::Atom) fail_expr(e, "expected an assertion R(...)");
        check_relation(e, f);
        return Assertion{e.name, to_terms(e, f, scope)};
    }

    static Condition to_cond(const Expr& e, const LayeredFormula& f, std::vector<std::string>& scope) {
        switch (e.kind) {
        case Expr::Kind::Atom:
            check_relation(e, f);
            return Condition::query(e.name, to_terms(e, f, scope));
        case Expr::Kind::Not: {
            const Expr& inner = e.children[0];
            if (inner.kind == Expr::Kind::True) return Condition::falsity();
            if (inner.kind == Expr::Kind::False) return Condition::truth();
            if (inner.kind != Expr::Kind::Atom) fail_expr(e, "negation applies only to queries R(...)");
            check_relation(inner, f);
            return Condition::neg_query(inner.name, to_terms(inner, f, scope));
        }
        case Expr::Kind::And: return Condition::conj(to_cond(e.children[0], f, scope), to_cond(e.children[1], f, scope));
        case Expr::Kind::Or: return Condition::disj(to_cond(e.children[0], f, scope), to_cond(e.children[1], f, scope));
        case Expr::Kind::Forall:
        case Expr::Kind::Exists: {
            scope.push_back(e.name);
            auto body = to_cond(e.children[0], f, scope);
            scope.pop_back();
            return e.kind == Expr::Kind::Forall ? Condition::forall(e.name, std::move(body))
                                                : Condition::exists(e.name, std::move(body));
        }
        case Expr::Kind::True: return Condition::truth();
        case Expr::Kind::False: return Condition::falsity();
        case Expr::Kind::Implies: fail_expr(e, "'=>' cannot appear inside a condition");
        }
        fail_expr(e, "malformed condition");
    }

    static Body to_def(const Expr& e, const LayeredFormula& f, std::vector<std::string>& scope) {
        switch (e.kind) {
        case Expr::Kind::Implies:
            return Body::implies(to_cond(e.children[0], f, scope), to_assertion(e.children[1], f, scope));
        case Expr::Kind::Atom: return Body::implies(Condition::truth(), to_assertion(e, f, scope));
        case Expr::Kind::Forall: {
            scope.push_back(e.name);
            auto b = to_def(e.children[0], f, scope);
            scope.pop_back();
            return Body::forall(e.name, std::move(b));
        }
        case Expr::Kind::And: return Body::conj(to_def(e.children[0], f, scope), to_def(e.children[1], f, scope));
        default: fail_expr(e, "expected a definition: 'cond => R(...)', 'forall x: ...', or a conjunction of these");
        }
    }

    static Body to_con(const Expr& e, const LayeredFormula& f, std::vector<std::string>& scope) {
        switch (e.kind) {
        case Expr::Kind::Implies:
            return Body::implies(to_cond(e.children[1], f, scope), to_assertion(e.children[0], f, scope));
        case Expr::Kind::Not:
            if (e.children[0].kind == Expr::Kind::Atom)
                return Body::implies(Condition::falsity(), to_assertion(e.children[0], f, scope));
            break;
        case Expr::Kind::Forall: {
            scope.push_back(e.name);
            auto b = to_con(e.children[0], f, scope);
            scope.pop_back();
            return Body::forall(e.name, std::move(b));
        }
        case Expr::Kind::And: return Body::conj(to_con(e.children[0], f, scope), to_con(e.children[1], f, scope));
        default: break;
        }
        fail_expr(e, "expected a constraint: 'R(...) => cond', 'forall x: ...', or a conjunction of these");
    }
};

// -- printing ---------------------------------------------------------------

inline void print_term(std::ostream& os, const Term& t, const Universe& u) {
    switch (t.kind) {
    case Term::Kind::Variable: os << t.name; return;
    case Term::Kind::Constant: os << u.name(t.atom); return;
    case Term::Kind::Apply:
        os << t.name;
        if (t.args.empty()) return;  // zero-arity function constant
        os << '(';
        for (std::size_t i = 0; i < t.args.size(); ++i) {
            if (i) os << ", ";
            print_term(os, t.args[i], u);
        }
        os << ')';
        return;
    }
}

inline void print_atom(std::ostream& os, const std::string& rel, const std::vector<Term>& args, const Universe& u) {
    os << rel << '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) os << ", ";
        print_term(os, args[i], u);
    }
    os << ')';
}

inline void print_cond(std::ostream& os, const Condition& c, const Universe& u) {
    using K = Condition::Kind;
    switch (c.kind) {
    case K::Query: print_atom(os, c.name, c.args, u); return;
    case K::NegQuery:
        os << '!';
        print_atom(os, c.name, c.args, u);
        return;
    case K::And:
    case K::Or:
        os << '(';
        print_cond(os, c.lhs(), u);
        os << (c.kind == K::And ? " & " : " | ");
        print_cond(os, c.rhs(), u);
        os << ')';
        return;
    case K::Exists:
    case K::Forall:
        os << '(' << (c.kind == K::Exists ? "exists " : "forall ") << c.name << ": ";
        print_cond(os, c.body(), u);
        os << ')';
        return;
    case K::True: os << "true"; return;
    case K::False: os << "false"; return;
    }
}

inline void print_body(std::ostream& os, const Body& b, Clause::Kind kind, const Universe& u) {
    switch (b.kind) {
    case Body::Kind::Implies:
        os << '(';
        if (kind == Clause::Kind::Define) {
            print_cond(os, b.cond, u);
            os << " => ";
            print_atom(os, b.head.relation, b.head.args, u);
        } else {
            print_atom(os, b.head.relation, b.head.args, u);
            os << " => ";
            print_cond(os, b.cond, u);
        }
        os << ')';
        return;
    case Body::Kind::Forall:
        os << "(forall " << b.var << ": ";
        print_body(os, b.children[0], kind, u);
        os << ')';
        return;
    case Body::Kind::And:
        os << '(';
        print_body(os, b.children[0], kind, u);
        os << " & ";
        print_body(os, b.children[1], kind, u);
        os << ')';
        return;
    }
}

}  // namespace text

inline LayeredFormula parse_program(std::string_view src) { return text::Parser(src).program(); }

inline std::string print_clause(const Clause& cl, const Universe& u) {
    std::ostringstream os;
    os << (cl.kind == Clause::Kind::Define ? "define" : "constrain") << " {\n  ";
    // the right spine of top-level conjunctions is printed one conjunct per line
    std::vector<const Body*> flat;
    const Body* b = &cl.body;
    while (b->kind == Body::Kind::And) {
        flat.push_back(&b->children[0]);
        b = &b->children[1];
    }
    flat.push_back(b);
    for (std::size_t i = 0; i < flat.size(); ++i) {
        if (i) os << ",\n  ";
        text::print_body(os, *flat[i], cl.kind, u);
    }
    os << "\n}\n";
    return os.str();
}

/// Prints a formula in the concrete syntax accepted by parse_program.
inline std::string print_program(const LayeredFormula& f) {
    std::ostringstream os;
    const auto& u = f.universe;
    os << "universe ";
    if (u.is_integer()) {
        os << u.lower() << ".." << u.upper();
    } else {
        os << '{';
        for (AtomId a = 0; a < u.size(); ++a) os << (a ? ", " : "") << u.name(a);
        os << '}';
    }
    os << ";\n";
    for (const auto& [name, ar] : f.relations) os << "rel " << name << '/' << ar << ";\n";
    for (const auto& [name, table] : f.functions.tables()) {
        os << "fun " << name << '/' << table.arity << " {";
        bool first = true;
        for (const auto& [args, r] : table.entries) {
            os << (first ? " " : ", ") << '(';
            for (std::size_t i = 0; i < args.size(); ++i) os << (i ? ", " : "") << u.name(args[i]);
            os << ") -> " << u.name(r);
            first = false;
        }
        os << " };\n";
    }
    for (const auto& [rel, ts] : f.facts.relations()) {
        for (const auto& t : ts) {
            os << "fact " << rel << '(';
            for (std::size_t i = 0; i < t.size(); ++i) os << (i ? ", " : "") << u.name(t[i]);
            os << ").\n";
        }
    }
    for (const auto& cl : f.layers) os << print_clause(cl, u);
    return os.str();
}

/// One line per tuple, `REL<TAB>atom<TAB>...`, relations in byte order and
/// tuples in universe order. Empty and generated relations are omitted.
inline std::string print_model(const Interpretation& rho, const Universe& u) {
    std::string out;
    for (const auto& [rel, ts] : rho.relations()) {
        if (is_reserved(rel)) continue;
        for (const auto& t : ts) {
            out += rel;
            for (auto a : t) {
                out += '\t';
                out += u.name(a);
            }
            out += '\n';
        }
    }
    return out;
}

/// Reads the format written by print_model. Every relation must be
/// declared in `f`; blank lines and `#` comments are ignored.
inline Interpretation parse_model(std::string_view src, const LayeredFormula& f) {
    Interpretation rho;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= src.size()) {
        auto end = src.find('\n', start);
        if (end == std::string_view::npos) end = src.size();
        auto line = src.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        std::vector<std::string> fields;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == '\t' || line[i] == ' ')) ++i;
            if (i < line.size() && line[i] == '#') break;
            std::size_t j = i;
            while (j < line.size() && line[j] != '\t' && line[j] != ' ') ++j;
            if (j > i) fields.emplace_back(line.substr(i, j - i));
            i = j;
        }
        if (fields.empty()) continue;
        auto it = f.relations.find(fields[0]);
        if (it == f.relations.end()) throw ParseError(line_no, 1, "unknown relation '" + fields[0] + "'");
        if (fields.size() - 1 != it->second)
            throw ParseError(line_no, 1, "relation '" + fields[0] + "' expects " + std::to_string(it->second) + " atoms");
        Tuple t;
        for (std::size_t k = 1; k < fields.size(); ++k) {
            auto a = f.universe.find(fields[k]);
            if (!a) throw ParseError(line_no, 1, "'" + fields[k] + "' is not an atom of the universe");
            t.push_back(*a);
        }
        rho.insert(fields[0], std::move(t));
        if (end == src.size()) break;
    }
    for (const auto& [rel, _] : f.relations) rho.declare(rel);
    return rho;
}

}  // namespace lfp
