#pragma once

// Core value types for layered fixed point programs: universes, terms,
// conditions, clause bodies, interpretations and function environments.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lfp {

using AtomId = std::uint32_t;
using Tuple = std::vector<AtomId>;
using TupleSet = std::set<Tuple>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unknown symbols, arity mismatches, unbound variables and other
/// violations of the declared signature.
class SignatureError : public Error {
public:
    using Error::Error;
};

/// Symbols starting with this prefix are generated by the engine (complement
/// relations, fresh propositions) and rejected in user input.
inline constexpr std::string_view kReservedPrefix = "__";

inline bool is_reserved(std::string_view name) {
    return name.starts_with(kReservedPrefix);
}

// ---------------------------------------------------------------------------
// Universe

/// A finite, non-empty, duplicate-free set of atoms. Either all atoms are
/// symbolic names or they form one contiguous integer range. Atoms are
/// referred to by their index, which is also their printing order.
class Universe {
public:
    Universe() = default;

    static Universe symbolic(std::vector<std::string> names) {
        if (names.empty()) throw SignatureError("universe must be non-empty");
        std::set<std::string> seen;
        for (const auto& n : names) {
            if (n.empty()) throw SignatureError("empty atom name");
            if (!seen.insert(n).second) throw SignatureError("duplicate atom '" + n + "' in universe");
        }
        Universe u;
        u.names_ = std::move(names);
        return u;
    }

    static Universe range(long lo, long hi) {
        if (hi < lo) throw SignatureError("universe must be non-empty");
        if (hi - lo >= 1'000'000) throw SignatureError("integer universe too large");
        Universe u;
        u.integer_ = true;
        u.lo_ = lo;
        u.hi_ = hi;
        return u;
    }

    std::size_t size() const {
        return integer_ ? static_cast<std::size_t>(hi_ - lo_ + 1) : names_.size();
    }
    bool is_integer() const { return integer_; }
    long lower() const { return lo_; }
    long upper() const { return hi_; }

    long value(AtomId a) const { return lo_ + static_cast<long>(a); }

    std::optional<AtomId> of_value(long v) const {
        if (!integer_ || v < lo_ || v > hi_) return std::nullopt;
        return static_cast<AtomId>(v - lo_);
    }

    std::string name(AtomId a) const {
        return integer_ ? std::to_string(value(a)) : names_.at(a);
    }

    std::optional<AtomId> find(std::string_view text) const {
        if (integer_) {
            long v = 0;
            std::size_t i = 0;
            bool neg = false;
            if (text.empty()) return std::nullopt;
            if (text[0] == '-') { neg = true; i = 1; }
            if (i == text.size()) return std::nullopt;
            for (; i < text.size(); ++i) {
                if (text[i] < '0' || text[i] > '9') return std::nullopt;
                v = v * 10 + (text[i] - '0');
                if (v > 1'000'000'000L) return std::nullopt;
            }
            return of_value(neg ? -v : v);
        }
        auto it = std::find(names_.begin(), names_.end(), text);
        if (it == names_.end()) return std::nullopt;
        return static_cast<AtomId>(it - names_.begin());
    }

    bool operator==(const Universe&) const = default;

private:
    bool integer_ = false;
    long lo_ = 0;
    long hi_ = -1;
    std::vector<std::string> names_;
};

/// Every tuple of the given arity over the universe, in lexicographic order.
inline TupleSet all_tuples(std::size_t universe_size, std::size_t arity) {
    TupleSet out;
    if (arity == 0) {
        out.insert(Tuple{});
        return out;
    }
    if (universe_size == 0) return out;
    Tuple t(arity, 0);
    for (;;) {
        out.insert(t);
        std::size_t i = arity;
        while (i > 0 && ++t[i - 1] == universe_size) {
            t[i - 1] = 0;
            --i;
        }
        if (i == 0) return out;
    }
}

// ---------------------------------------------------------------------------
// Syntax

struct Term {
    enum class Kind { Variable, Constant, Apply };

    Kind kind = Kind::Variable;
    std::string name;  // variable or function symbol
    AtomId atom = 0;   // Constant only
    std::vector<Term> args;

    static Term var(std::string n) { return Term{Kind::Variable, std::move(n), 0, {}}; }
    static Term constant(AtomId a) { return Term{Kind::Constant, {}, a, {}}; }
    static Term apply(std::string f, std::vector<Term> a) {
        return Term{Kind::Apply, std::move(f), 0, std::move(a)};
    }

    bool operator==(const Term&) const = default;
};

struct Condition {
    enum class Kind { Query, NegQuery, And, Or, Exists, Forall, True, False };

    Kind kind = Kind::True;
    std::string name;  // relation (queries) or bound variable (quantifiers)
    std::vector<Term> args;
    std::vector<Condition> children;

    static Condition query(std::string r, std::vector<Term> a) {
        return Condition{Kind::Query, std::move(r), std::move(a), {}};
    }
    static Condition neg_query(std::string r, std::vector<Term> a) {
        return Condition{Kind::NegQuery, std::move(r), std::move(a), {}};
    }
    static Condition conj(Condition l, Condition r) {
        return Condition{Kind::And, {}, {}, {std::move(l), std::move(r)}};
    }
    static Condition disj(Condition l, Condition r) {
        return Condition{Kind::Or, {}, {}, {std::move(l), std::move(r)}};
    }
    static Condition exists(std::string x, Condition c) {
        return Condition{Kind::Exists, std::move(x), {}, {std::move(c)}};
    }
    static Condition forall(std::string x, Condition c) {
        return Condition{Kind::Forall, std::move(x), {}, {std::move(c)}};
    }
    static Condition truth() { return Condition{Kind::True, {}, {}, {}}; }
    static Condition falsity() { return Condition{Kind::False, {}, {}, {}}; }

    const Condition& lhs() const { return children.at(0); }
    const Condition& rhs() const { return children.at(1); }
    const Condition& body() const { return children.at(0); }

    bool operator==(const Condition&) const = default;
};

struct Assertion {
    std::string relation;
    std::vector<Term> args;

    bool operator==(const Assertion&) const = default;
};

/// Body of a clause. The same shape serves both directions: in a define
/// clause `Implies` reads `cond => head`, in a constrain clause it reads
/// `head => cond`.
struct Body {
    enum class Kind { Implies, Forall, And };

    Kind kind = Kind::Implies;
    std::string var;  // Forall
    Condition cond;   // Implies
    Assertion head;   // Implies
    std::vector<Body> children;

    static Body implies(Condition c, Assertion h) {
        return Body{Kind::Implies, {}, std::move(c), std::move(h), {}};
    }
    static Body forall(std::string x, Body b) {
        return Body{Kind::Forall, std::move(x), {}, {}, {std::move(b)}};
    }
    static Body conj(Body l, Body r) {
        return Body{Kind::And, {}, {}, {}, {std::move(l), std::move(r)}};
    }

    bool operator==(const Body&) const = default;
};

struct Clause {
    enum class Kind { Define, Constrain };

    Kind kind = Kind::Define;
    Body body;

    static Clause define(Body b) { return Clause{Kind::Define, std::move(b)}; }
    static Clause constrain(Body b) { return Clause{Kind::Constrain, std::move(b)}; }

    bool operator==(const Clause&) const = default;
};

/// Conjoins a non-empty list of bodies, right-nested.
inline Body conj_all(std::vector<Body> parts) {
    if (parts.empty()) throw Error("conj_all: empty body list");
    Body acc = std::move(parts.back());
    for (std::size_t i = parts.size() - 1; i-- > 0;) acc = Body::conj(std::move(parts[i]), std::move(acc));
    return acc;
}

inline Condition conj_all(std::vector<Condition> parts) {
    if (parts.empty()) return Condition::truth();
    Condition acc = std::move(parts.back());
    for (std::size_t i = parts.size() - 1; i-- > 0;) acc = Condition::conj(std::move(parts[i]), std::move(acc));
    return acc;
}

// ---------------------------------------------------------------------------
// Semantic domains

/// Finite mapping from relation symbols to tuple sets. Relations that are
/// absent and relations that are present but empty compare equal.
class Interpretation {
public:
    using Map = std::map<std::string, TupleSet, std::less<>>;

    void declare(const std::string& rel) { rels_[rel]; }

    bool contains(std::string_view rel, const Tuple& t) const {
        auto it = rels_.find(rel);
        return it != rels_.end() && it->second.contains(t);
    }

    bool insert(const std::string& rel, Tuple t) { return rels_[rel].insert(std::move(t)).second; }

    const TupleSet& tuples(std::string_view rel) const {
        static const TupleSet empty;
        auto it = rels_.find(rel);
        return it == rels_.end() ? empty : it->second;
    }

    TupleSet& at(const std::string& rel) { return rels_[rel]; }

    void assign(const std::string& rel, TupleSet ts) { rels_[rel] = std::move(ts); }
    void erase(std::string_view rel) {
        auto it = rels_.find(rel);
        if (it != rels_.end()) rels_.erase(it);
    }

    const Map& relations() const { return rels_; }

    std::size_t size() const {
        std::size_t n = 0;
        for (const auto& [_, ts] : rels_) n += ts.size();
        return n;
    }

    friend bool operator==(const Interpretation& a, const Interpretation& b) {
        auto covers = [](const Interpretation& x, const Interpretation& y) {
            for (const auto& [r, ts] : x.rels_) {
                if (ts != y.tuples(r)) return false;
            }
            return true;
        };
        return covers(a, b) && covers(b, a);
    }

private:
    Map rels_;
};

/// Partial finite functions over the universe. On integer universes the
/// built-ins `add` and `sub` are available unless shadowed by a table.
class FunctionEnv {
public:
    struct Table {
        std::size_t arity = 0;
        std::map<Tuple, AtomId> entries;
        bool operator==(const Table&) const = default;
    };

    void define(const std::string& name, Table table) {
        if (is_reserved(name)) throw SignatureError("function name '" + name + "' uses a reserved prefix");
        tables_[name] = std::move(table);
    }

    const std::map<std::string, Table>& tables() const { return tables_; }

    static bool is_builtin(std::string_view name) { return name == "add" || name == "sub"; }

    /// Arity of `name`, or nullopt when the symbol is unknown for this universe.
    std::optional<std::size_t> arity(std::string_view name, const Universe& u) const {
        if (auto it = tables_.find(std::string(name)); it != tables_.end()) return it->second.arity;
        if (u.is_integer() && is_builtin(name)) return 2;
        return std::nullopt;
    }

    /// nullopt means the function is undefined at this point.
    std::optional<AtomId> apply(const std::string& name, std::span<const AtomId> args, const Universe& u) const {
        if (auto it = tables_.find(name); it != tables_.end()) {
            if (args.size() != it->second.arity)
                throw SignatureError("function '" + name + "' applied to wrong number of arguments");
            auto hit = it->second.entries.find(Tuple(args.begin(), args.end()));
            if (hit == it->second.entries.end()) return std::nullopt;
            return hit->second;
        }
        if (u.is_integer() && is_builtin(name)) {
            if (args.size() != 2) throw SignatureError("function '" + name + "' expects 2 arguments");
            long a = u.value(args[0]);
            long b = u.value(args[1]);
            return u.of_value(name == "add" ? a + b : a - b);
        }
        throw SignatureError("unknown function symbol '" + name + "'");
    }

    bool operator==(const FunctionEnv&) const = default;

private:
    std::map<std::string, Table> tables_;
};

/// Variable bindings. Later bindings shadow earlier ones.
class Valuation {
public:
    Valuation() = default;
    Valuation(std::initializer_list<std::pair<std::string, AtomId>> init) : binds_(init) {}

    void push(std::string var, AtomId a) { binds_.emplace_back(std::move(var), a); }
    void pop() { binds_.pop_back(); }
    void set_top(AtomId a) { binds_.back().second = a; }

    std::optional<AtomId> lookup(std::string_view var) const {
        for (auto it = binds_.rbegin(); it != binds_.rend(); ++it) {
            if (it->first == var) return it->second;
        }
        return std::nullopt;
    }

private:
    std::vector<std::pair<std::string, AtomId>> binds_;
};

/// Evaluates a term; nullopt is the Undefined value.
inline std::optional<AtomId> eval_term(const Term& t, const FunctionEnv& fns, const Universe& u,
                                       const Valuation& val) {
    switch (t.kind) {
    case Term::Kind::Variable: {
        auto a = val.lookup(t.name);
        if (!a) throw SignatureError("unbound variable '" + t.name + "'");
        return a;
    }
    case Term::Kind::Constant:
        return t.atom;
    case Term::Kind::Apply: {
        Tuple args;
        args.reserve(t.args.size());
        bool undefined = false;
        for (const auto& a : t.args) {
            auto v = eval_term(a, fns, u, val);
            if (!v) undefined = true;
            else args.push_back(*v);
        }
        // Arguments are still evaluated so that unknown symbols are reported.
        if (!fns.arity(t.name, u)) throw SignatureError("unknown function symbol '" + t.name + "'");
        if (undefined) return std::nullopt;
        return fns.apply(t.name, args, u);
    }
    }
    return std::nullopt;
}

/// Evaluates an argument list; nullopt if any element is Undefined.
inline std::optional<Tuple> eval_terms(std::span<const Term> ts, const FunctionEnv& fns, const Universe& u,
                                       const Valuation& val) {
    Tuple out;
    out.reserve(ts.size());
    bool undefined = false;
    for (const auto& t : ts) {
        auto v = eval_term(t, fns, u, val);
        if (!v) undefined = true;
        else out.push_back(*v);
    }
    if (undefined) return std::nullopt;
    return out;
}

// ---------------------------------------------------------------------------
// Programs

struct LayeredFormula {
    Universe universe;
    std::map<std::string, std::size_t> relations;  // symbol -> arity
    FunctionEnv functions;
    Interpretation facts;
    std::vector<Clause> layers;

    std::size_t arity(std::string_view rel) const {
        auto it = relations.find(std::string(rel));
        if (it == relations.end()) throw SignatureError("unknown relation '" + std::string(rel) + "'");
        return it->second;
    }

    bool operator==(const LayeredFormula& o) const {
        return universe == o.universe && relations == o.relations && functions == o.functions &&
               facts == o.facts && layers == o.layers;
    }
};

namespace detail {

inline void collect_asserted(const Body& b, std::set<std::string>& out) {
    switch (b.kind) {
    case Body::Kind::Implies: out.insert(b.head.relation); break;
    case Body::Kind::Forall: collect_asserted(b.children[0], out); break;
    case Body::Kind::And:
        collect_asserted(b.children[0], out);
        collect_asserted(b.children[1], out);
        break;
    }
}

struct Validator {
    const LayeredFormula& f;
    std::vector<std::string> scope;

    bool bound(const std::string& x) const { return std::find(scope.begin(), scope.end(), x) != scope.end(); }

    void term(const Term& t) {
        switch (t.kind) {
        case Term::Kind::Variable:
            if (!bound(t.name)) throw SignatureError("free variable '" + t.name + "' (clauses must be closed)");
            break;
        case Term::Kind::Constant:
            if (t.atom >= f.universe.size()) throw SignatureError("constant outside the universe");
            break;
        case Term::Kind::Apply: {
            if (is_reserved(t.name)) throw SignatureError("function '" + t.name + "' uses a reserved prefix");
            auto ar = f.functions.arity(t.name, f.universe);
            if (!ar) throw SignatureError("unknown function symbol '" + t.name + "'");
            if (*ar != t.args.size())
                throw SignatureError("function '" + t.name + "' has arity " + std::to_string(*ar) + " but is applied to " +
                                     std::to_string(t.args.size()) + " arguments");
            for (const auto& a : t.args) term(a);
            break;
        }
        }
    }

    void atom(const std::string& rel, const std::vector<Term>& args) {
        auto ar = f.arity(rel);
        if (ar != args.size())
            throw SignatureError("relation '" + rel + "' has arity " + std::to_string(ar) + " but is used with " +
                                 std::to_string(args.size()) + " arguments");
        for (const auto& a : args) term(a);
    }

    void cond(const Condition& c) {
        using K = Condition::Kind;
        switch (c.kind) {
        case K::Query:
        case K::NegQuery: atom(c.name, c.args); break;
        case K::And:
        case K::Or:
            cond(c.children.at(0));
            cond(c.children.at(1));
            break;
        case K::Exists:
        case K::Forall:
            scope.push_back(c.name);
            cond(c.children.at(0));
            scope.pop_back();
            break;
        case K::True:
        case K::False: break;
        }
    }

    void body(const Body& b) {
        switch (b.kind) {
        case Body::Kind::Implies:
            cond(b.cond);
            atom(b.head.relation, b.head.args);
            break;
        case Body::Kind::Forall:
            scope.push_back(b.var);
            body(b.children.at(0));
            scope.pop_back();
            break;
        case Body::Kind::And:
            body(b.children.at(0));
            body(b.children.at(1));
            break;
        }
    }
};

}  // namespace detail

/// Relations asserted (defined or constrained) by one clause.
inline std::set<std::string> asserted_relations(const Clause& cl) {
    std::set<std::string> out;
    detail::collect_asserted(cl.body, out);
    return out;
}

/// Checks the signature invariants of a formula: known symbols with
/// matching arities, closed clauses, facts inside the universe and only on
/// relations that no layer asserts. Throws SignatureError.
inline void validate(const LayeredFormula& f) {
    if (f.universe.size() == 0) throw SignatureError("universe must be non-empty");
    for (const auto& [name, _] : f.relations) {
        if (is_reserved(name)) throw SignatureError("relation name '" + name + "' uses a reserved prefix");
    }
    std::set<std::string> asserted;
    for (const auto& cl : f.layers) {
        detail::Validator v{f, {}};
        v.body(cl.body);
        detail::collect_asserted(cl.body, asserted);
    }
    for (const auto& [rel, ts] : f.facts.relations()) {
        auto ar = f.arity(rel);
        if (!ts.empty() && asserted.contains(rel))
            throw SignatureError("relation '" + rel + "' has facts but is asserted by a layer");
        for (const auto& t : ts) {
            if (t.size() != ar) throw SignatureError("fact for '" + rel + "' has wrong arity");
            for (auto a : t) {
                if (a >= f.universe.size()) throw SignatureError("fact for '" + rel + "' mentions an atom outside the universe");
            }
        }
    }
}

/// Checks that every tuple of `rho` lies in the universe and matches the
/// arity declared for its relation.
inline void check_interpretation(const LayeredFormula& f, const Interpretation& rho) {
    for (const auto& [rel, ts] : rho.relations()) {
        auto it = f.relations.find(rel);
        if (it == f.relations.end()) throw SignatureError("interpretation mentions unknown relation '" + rel + "'");
        for (const auto& t : ts) {
            if (t.size() != it->second) throw SignatureError("tuple of wrong arity in '" + rel + "'");
            for (auto a : t) {
                if (a >= f.universe.size()) throw SignatureError("tuple outside the universe in '" + rel + "'");
            }
        }
    }
}

}  // namespace lfp
