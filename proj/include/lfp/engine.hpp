#pragma once

// Least-model solver. Each define layer is grounded over the universe,
// rewritten into simple Horn clauses and propagated in linear time. A
// constrain layer is first dualized into two define layers over fresh
// complement relations.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "lfp/model.hpp"
#include "lfp/semantics.hpp"
#include "lfp/stratify.hpp"

namespace lfp {

// ---------------------------------------------------------------------------
// Generated symbols

inline std::string complement_symbol(std::string_view rel) {
    return std::string(kReservedPrefix) + "co_" + std::string(rel);
}

inline bool is_complement_symbol(std::string_view rel) {
    return rel.starts_with(std::string(kReservedPrefix) + "co_");
}

class FreshNames {
public:
    std::string next() { return std::string(kReservedPrefix) + "q" + std::to_string(++count_); }
    std::size_t count() const { return count_; }

private:
    std::size_t count_ = 0;
};

// ---------------------------------------------------------------------------
// Ground clauses

struct GroundAtom {
    std::string relation;
    Tuple args;

    auto operator<=>(const GroundAtom&) const = default;
    bool operator==(const GroundAtom&) const = default;
};

struct GroundAtomHash {
    std::size_t operator()(const GroundAtom& a) const noexcept {
        std::size_t h = std::hash<std::string>{}(a.relation);
        for (auto x : a.args) h = h * 1000003u ^ std::hash<AtomId>{}(x);
        return h;
    }
};

/// Quantifier-free condition over ground atoms of the layer being solved.
/// Everything already known has been folded to True or False.
struct GroundCond {
    enum class Kind { True, False, Atom, And, Or };

    Kind kind = Kind::True;
    GroundAtom atom;
    std::vector<GroundCond> children;

    static GroundCond truth() { return {Kind::True, {}, {}}; }
    static GroundCond falsity() { return {Kind::False, {}, {}}; }
    static GroundCond of(GroundAtom a) { return {Kind::Atom, std::move(a), {}}; }
    static GroundCond of(bool b) { return b ? truth() : falsity(); }

    /// Folds constants and flattens nested conjunctions.
    static GroundCond all(std::vector<GroundCond> parts) { return combine(Kind::And, std::move(parts)); }
    /// Folds constants and flattens nested disjunctions.
    static GroundCond any(std::vector<GroundCond> parts) { return combine(Kind::Or, std::move(parts)); }

    bool operator==(const GroundCond&) const = default;

private:
    static GroundCond combine(Kind op, std::vector<GroundCond> parts) {
        const Kind unit = op == Kind::And ? Kind::True : Kind::False;
        const Kind zero = op == Kind::And ? Kind::False : Kind::True;
        std::vector<GroundCond> kept;
        kept.reserve(parts.size());
        for (auto& p : parts) {
            if (p.kind == zero) return {zero, {}, {}};
            if (p.kind == unit) continue;
            if (p.kind == op) {
                for (auto& c : p.children) kept.push_back(std::move(c));
            } else {
                kept.push_back(std::move(p));
            }
        }
        if (kept.empty()) return {unit, {}, {}};
        if (kept.size() == 1) return std::move(kept.front());
        return {op, {}, std::move(kept)};
    }
};

struct GroundClause {
    GroundCond body;
    GroundAtom head;

    bool operator==(const GroundClause&) const = default;
};

/// Conjunction of positive ground atoms implying the head.
struct SimpleClause {
    std::vector<GroundAtom> body;
    GroundAtom head;

    bool operator==(const SimpleClause&) const = default;
};

/// Size measure used to bound the rewrite: every atom and operator costs 1,
/// a binary disjunction costs 6. An n-ary node counts as n-1 binary ones.
inline std::size_t rewrite_cost(const GroundCond& c) {
    switch (c.kind) {
    case GroundCond::Kind::True:
    case GroundCond::Kind::False:
    case GroundCond::Kind::Atom: return 1;
    case GroundCond::Kind::And:
    case GroundCond::Kind::Or: {
        std::size_t n = 0;
        for (const auto& ch : c.children) n += rewrite_cost(ch);
        const std::size_t per = c.kind == GroundCond::Kind::Or ? 6 : 1;
        return n + per * (c.children.size() - 1);
    }
    }
    return 0;
}

inline std::size_t rewrite_cost(const std::vector<GroundClause>& cls) {
    std::size_t n = 0;
    for (const auto& c : cls) n += rewrite_cost(c.body) + 2;  // implication and head
    return n;
}

inline std::size_t clause_size(const std::vector<SimpleClause>& cls) {
    std::size_t n = 0;
    for (const auto& c : cls) n += c.body.size() + 1;
    return n;
}

// ---------------------------------------------------------------------------
// Phase 1: grounding

namespace detail {

struct Grounder {
    const Universe& u;
    const FunctionEnv& fns;
    const Interpretation& solved;
    const std::set<std::string>& layer;
    Valuation val;
    std::vector<GroundClause> out;

    GroundCond cond(const Condition& c) {
        using K = Condition::Kind;
        switch (c.kind) {
        case K::Query: {
            auto t = eval_terms(c.args, fns, u, val);
            // An undefined argument makes a query false; for a complement
            // relation the query stands for a negated one, so it is true.
            if (!t) return GroundCond::of(is_complement_symbol(c.name));
            if (layer.contains(c.name)) return GroundCond::of(GroundAtom{c.name, std::move(*t)});
            return GroundCond::of(solved.contains(c.name, *t));
        }
        case K::NegQuery: {
            if (layer.contains(c.name))
                throw Error("negative query on '" + c.name + "' inside the layer asserting it");
            auto t = eval_terms(c.args, fns, u, val);
            return GroundCond::of(!t || !solved.contains(c.name, *t));
        }
        case K::And: return GroundCond::all({cond(c.lhs()), cond(c.rhs())});
        case K::Or: return GroundCond::any({cond(c.lhs()), cond(c.rhs())});
        case K::Exists:
        case K::Forall: {
            std::vector<GroundCond> parts;
            parts.reserve(u.size());
            val.push(c.name, 0);
            for (AtomId a = 0; a < u.size(); ++a) {
                val.set_top(a);
                parts.push_back(cond(c.body()));
            }
            val.pop();
            return c.kind == K::Exists ? GroundCond::any(std::move(parts)) : GroundCond::all(std::move(parts));
        }
        case K::True: return GroundCond::truth();
        case K::False: return GroundCond::falsity();
        }
        return GroundCond::falsity();
    }

    void body(const Body& b) {
        switch (b.kind) {
        case Body::Kind::Implies: {
            auto head = eval_terms(b.head.args, fns, u, val);
            if (!head) return;
            auto c = cond(b.cond);
            if (c.kind == GroundCond::Kind::False) return;
            out.push_back(GroundClause{std::move(c), GroundAtom{b.head.relation, std::move(*head)}});
            return;
        }
        case Body::Kind::Forall:
            val.push(b.var, 0);
            for (AtomId a = 0; a < u.size(); ++a) {
                val.set_top(a);
                body(b.children[0]);
            }
            val.pop();
            return;
        case Body::Kind::And:
            body(b.children[0]);
            body(b.children[1]);
            return;
        }
    }
};

}  // namespace detail

/// Instantiates every quantifier of a define clause over the universe.
/// Queries on relations the clause does not assert are looked up in
/// `solved` and folded; clauses whose body folds to false are dropped, as
/// are instances whose head is undefined.
inline std::vector<GroundClause> ground(const Clause& cl, const Universe& u, const FunctionEnv& fns,
                                        const Interpretation& solved) {
    if (cl.kind != Clause::Kind::Define) throw Error("ground: constrain clauses must be dualized first");
    const auto layer = asserted_relations(cl);
    detail::Grounder g{u, fns, solved, layer, {}, {}};
    g.body(cl.body);
    return std::move(g.out);
}

// ---------------------------------------------------------------------------
// Phase 2: rewriting to simple clauses

namespace detail {

inline void emit(const GroundCond& c, const GroundAtom& head, FreshNames& fresh, std::vector<SimpleClause>& out);

inline GroundAtom as_atom(const GroundCond& c, FreshNames& fresh, std::vector<SimpleClause>& out) {
    if (c.kind == GroundCond::Kind::Atom) return c.atom;
    GroundAtom q{fresh.next(), {}};
    emit(c, q, fresh, out);
    return q;
}

inline void emit(const GroundCond& c, const GroundAtom& head, FreshNames& fresh, std::vector<SimpleClause>& out) {
    switch (c.kind) {
    case GroundCond::Kind::True: out.push_back({{}, head}); return;
    case GroundCond::Kind::False: return;
    case GroundCond::Kind::Atom: out.push_back({{c.atom}, head}); return;
    case GroundCond::Kind::And: {
        SimpleClause sc{{}, head};
        for (const auto& ch : c.children) sc.body.push_back(as_atom(ch, fresh, out));
        out.push_back(std::move(sc));
        return;
    }
    case GroundCond::Kind::Or: {
        GroundAtom q{fresh.next(), {}};
        for (const auto& ch : c.children) emit(ch, q, fresh, out);
        out.push_back({{q}, head});
        return;
    }
    }
}

}  // namespace detail

/// Removes every disjunction: `c1 | c2 => R` becomes `c1 => Q, c2 => Q,
/// Q => R` for a fresh nullary Q, and a disjunction nested in a
/// conjunction is named the same way.
inline std::vector<SimpleClause> rewrite_simple(const std::vector<GroundClause>& ground_clauses, FreshNames& fresh) {
    std::vector<SimpleClause> out;
    out.reserve(ground_clauses.size());
    for (const auto& gc : ground_clauses) detail::emit(gc.body, gc.head, fresh, out);
    return out;
}

inline std::vector<SimpleClause> rewrite_simple(const std::vector<GroundClause>& ground_clauses) {
    FreshNames fresh;
    return rewrite_simple(ground_clauses, fresh);
}

// ---------------------------------------------------------------------------
// Phase 3: propagation

/// Least set of atoms closed under the clauses, by counting unsatisfied body
/// atoms per clause and draining a worklist of newly derived atoms.
inline std::set<GroundAtom> propagate(const std::vector<SimpleClause>& clauses) {
    std::unordered_map<GroundAtom, std::size_t, GroundAtomHash> ids;
    std::vector<const GroundAtom*> atoms;
    auto intern = [&](const GroundAtom& a) {
        auto [it, fresh] = ids.try_emplace(a, atoms.size());
        if (fresh) atoms.push_back(&it->first);
        return it->second;
    };

    std::vector<std::size_t> remaining(clauses.size());
    std::vector<std::size_t> heads(clauses.size());
    std::vector<std::vector<std::size_t>> watchers;
    std::vector<std::size_t> queue;
    std::vector<char> holds;

    auto grow = [&] {
        watchers.resize(atoms.size());
        holds.resize(atoms.size(), 0);
    };
    auto derive = [&](std::size_t atom) {
        if (!holds[atom]) {
            holds[atom] = 1;
            queue.push_back(atom);
        }
    };

    std::vector<std::size_t> body;
    for (std::size_t c = 0; c < clauses.size(); ++c) {
        heads[c] = intern(clauses[c].head);
        body.clear();
        for (const auto& b : clauses[c].body) body.push_back(intern(b));
        std::sort(body.begin(), body.end());
        body.erase(std::unique(body.begin(), body.end()), body.end());
        grow();
        remaining[c] = body.size();
        for (auto b : body) watchers[b].push_back(c);
    }
    grow();
    for (std::size_t c = 0; c < clauses.size(); ++c) {
        if (remaining[c] == 0) derive(heads[c]);
    }
    while (!queue.empty()) {
        const auto a = queue.back();
        queue.pop_back();
        for (auto c : watchers[a]) {
            if (--remaining[c] == 0) derive(heads[c]);
        }
    }

    std::set<GroundAtom> out;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
        if (holds[a]) out.insert(*atoms[a]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dualization of constrain layers

namespace detail {

/// Negation normal form of `not c`, where a negated query on a relation of
/// `layer` becomes a positive query on its complement relation.
inline Condition negate(const Condition& c, const std::set<std::string>& layer) {
    using K = Condition::Kind;
    switch (c.kind) {
    case K::Query:
        if (layer.contains(c.name)) return Condition::query(complement_symbol(c.name), c.args);
        return Condition::neg_query(c.name, c.args);
    case K::NegQuery: return Condition::query(c.name, c.args);
    case K::And: return Condition::disj(negate(c.lhs(), layer), negate(c.rhs(), layer));
    case K::Or: return Condition::conj(negate(c.lhs(), layer), negate(c.rhs(), layer));
    case K::Exists: return Condition::forall(c.name, negate(c.body(), layer));
    case K::Forall: return Condition::exists(c.name, negate(c.body(), layer));
    case K::True: return Condition::falsity();
    case K::False: return Condition::truth();
    }
    return c;
}

/// Replaces positive queries on relations of `layer` by true.
inline Condition relax(const Condition& c, const std::set<std::string>& layer) {
    using K = Condition::Kind;
    switch (c.kind) {
    case K::Query: return layer.contains(c.name) ? Condition::truth() : c;
    case K::And:
    case K::Or:
    case K::Exists:
    case K::Forall: {
        Condition out = c;
        for (auto& ch : out.children) ch = relax(ch, layer);
        return out;
    }
    default: return c;
    }
}

inline Body complement_body(const Body& b, const std::set<std::string>& layer) {
    switch (b.kind) {
    case Body::Kind::Implies:
        return Body::implies(negate(b.cond, layer), Assertion{complement_symbol(b.head.relation), b.head.args});
    case Body::Kind::Forall: return Body::forall(b.var, complement_body(b.children[0], layer));
    case Body::Kind::And:
        return Body::conj(complement_body(b.children[0], layer), complement_body(b.children[1], layer));
    }
    return b;
}

inline Body restore_body(const Body& b, const std::set<std::string>& layer) {
    switch (b.kind) {
    case Body::Kind::Implies:
        return Body::implies(Condition::conj(relax(b.cond, layer),
                                             Condition::neg_query(complement_symbol(b.head.relation), b.head.args)),
                             b.head);
    case Body::Kind::Forall: return Body::forall(b.var, restore_body(b.children[0], layer));
    case Body::Kind::And: return Body::conj(restore_body(b.children[0], layer), restore_body(b.children[1], layer));
    }
    return b;
}

}  // namespace detail

struct DualizedLayers {
    /// Least fixed point of the complement relations.
    Clause complement;
    /// Each implication `R(u) => cond` becomes `cond' & !R~(u) => R(u)`
    /// with same-layer positive queries of cond replaced by true.
    Clause restore;
    /// `forall xs: !R~(xs) => R(xs)` for every constrained R, so that tuples
    /// no implication mentions are kept as well.
    Clause closure;
};

/// Turns a constrain clause into define clauses over complement relations.
/// `arities` supplies the arity of each constrained relation.
inline DualizedLayers dualize(const Clause& cl, const std::map<std::string, std::size_t>& arities) {
    if (cl.kind != Clause::Kind::Constrain) throw Error("dualize: expected a constrain clause");
    const auto layer = asserted_relations(cl);
    DualizedLayers out;
    out.complement = Clause::define(detail::complement_body(cl.body, layer));
    out.restore = Clause::define(detail::restore_body(cl.body, layer));

    std::vector<Body> closures;
    for (const auto& rel : layer) {
        auto it = arities.find(rel);
        if (it == arities.end()) throw SignatureError("unknown relation '" + rel + "'");
        std::vector<Term> vars;
        for (std::size_t i = 0; i < it->second; ++i) vars.push_back(Term::var(std::string(kReservedPrefix) + "x" + std::to_string(i)));
        Body b = Body::implies(Condition::neg_query(complement_symbol(rel), vars), Assertion{rel, vars});
        for (std::size_t i = it->second; i-- > 0;) b = Body::forall(vars[i].name, std::move(b));
        closures.push_back(std::move(b));
    }
    out.closure = Clause::define(conj_all(std::move(closures)));
    return out;
}

// ---------------------------------------------------------------------------
// Direct greatest fixed point (differential check for dualize)

namespace detail {

inline bool prune(const Body& b, const Universe& u, const FunctionEnv& fns, Valuation& val, Interpretation& rho) {
    switch (b.kind) {
    case Body::Kind::Implies: {
        auto head = eval_terms(b.head.args, fns, u, val);
        if (!head || !rho.contains(b.head.relation, *head)) return false;
        if (sat_cond(rho, u, fns, val, b.cond)) return false;
        rho.at(b.head.relation).erase(*head);
        return true;
    }
    case Body::Kind::Forall: {
        bool changed = false;
        val.push(b.var, 0);
        for (AtomId a = 0; a < u.size(); ++a) {
            val.set_top(a);
            changed |= prune(b.children[0], u, fns, val, rho);
        }
        val.pop();
        return changed;
    }
    case Body::Kind::And: {
        bool changed = prune(b.children[0], u, fns, val, rho);
        changed |= prune(b.children[1], u, fns, val, rho);
        return changed;
    }
    }
    return false;
}

}  // namespace detail

/// Starts the clause's constrained relations at every tuple and deletes
/// tuples whose implication fails until nothing changes. Lower layers must
/// already be solved in `rho`.
inline Interpretation gfp_iterate(const Clause& cl, const LayeredFormula& f, Interpretation rho) {
    if (cl.kind != Clause::Kind::Constrain) throw Error("gfp_iterate: expected a constrain clause");
    for (const auto& rel : asserted_relations(cl)) rho.assign(rel, all_tuples(f.universe.size(), f.arity(rel)));
    for (;;) {
        Valuation val;
        if (!detail::prune(cl.body, f.universe, f.functions, val, rho)) return rho;
    }
}

// ---------------------------------------------------------------------------
// Nesting depth

inline std::size_t nesting_depth(const Condition& c) {
    switch (c.kind) {
    case Condition::Kind::Exists:
    case Condition::Kind::Forall: return 1 + nesting_depth(c.body());
    case Condition::Kind::And:
    case Condition::Kind::Or: return std::max(nesting_depth(c.lhs()), nesting_depth(c.rhs()));
    default: return 0;
    }
}

inline std::size_t nesting_depth(const Body& b) {
    switch (b.kind) {
    case Body::Kind::Implies: return nesting_depth(b.cond);
    case Body::Kind::Forall: return 1 + nesting_depth(b.children[0]);
    case Body::Kind::And: return std::max(nesting_depth(b.children[0]), nesting_depth(b.children[1]));
    }
    return 0;
}

inline std::size_t nesting_depth(const Clause& cl) { return nesting_depth(cl.body); }

/// Number of syntax nodes: queries, constants, connectives, quantifiers
/// and assertions each count 1; terms are not counted separately.
inline std::size_t syntax_size(const Condition& c) {
    std::size_t n = 1;
    for (const auto& ch : c.children) n += syntax_size(ch);
    return n;
}

inline std::size_t syntax_size(const Body& b) {
    if (b.kind == Body::Kind::Implies) return 2 + syntax_size(b.cond);
    std::size_t n = 1;
    for (const auto& ch : b.children) n += syntax_size(ch);
    return n;
}

inline std::size_t syntax_size(const Clause& cl) { return syntax_size(cl.body); }

// ---------------------------------------------------------------------------
// Solving

struct LayerStats {
    std::size_t layer = 0;  // 1-based
    Clause::Kind kind = Clause::Kind::Define;
    std::size_t nesting_depth = 0;
    std::size_t ground_clauses = 0;
    std::size_t simple_clauses = 0;
    std::size_t fresh_symbols = 0;
};

struct SolveStats {
    std::vector<LayerStats> layers;
};

/// Ground clauses, simple clauses and fresh symbols produced for one define
/// clause against an interpretation of everything below it.
struct GroundClauseSet {
    std::vector<SimpleClause> clauses;
    std::size_t ground_count = 0;
    std::size_t fresh_count = 0;
};

inline GroundClauseSet ground_layer(const Clause& cl, const Universe& u, const FunctionEnv& fns,
                                    const Interpretation& solved) {
    GroundClauseSet out;
    auto g = ground(cl, u, fns, solved);
    out.ground_count = g.size();
    FreshNames fresh;
    out.clauses = rewrite_simple(g, fresh);
    out.fresh_count = fresh.count();
    return out;
}

namespace detail {

inline void solve_define(const Clause& cl, const Universe& u, const FunctionEnv& fns, Interpretation& rho,
                         LayerStats* stats) {
    auto set = ground_layer(cl, u, fns, rho);
    if (stats) {
        stats->ground_clauses += set.ground_count;
        stats->simple_clauses += set.clauses.size();
        stats->fresh_symbols += set.fresh_count;
    }
    for (const auto& rel : asserted_relations(cl)) rho.declare(rel);
    for (auto& atom : propagate(set.clauses)) {
        if (atom.relation.starts_with(kReservedPrefix) && !is_complement_symbol(atom.relation)) continue;
        rho.insert(atom.relation, std::move(atom.args));
    }
}

}  // namespace detail

/// Least model of a stratified formula above its facts. Layers are solved
/// in order; generated relations are removed from the result, and every
/// declared relation is present (possibly empty).
inline Interpretation solve(const LayeredFormula& f, SolveStats* stats = nullptr) {
    validate(f);
    check_stratification(f);

    Interpretation rho;
    for (const auto& [rel, _] : f.relations) rho.declare(rel);
    for (const auto& [rel, ts] : f.facts.relations()) rho.at(rel).insert(ts.begin(), ts.end());

    if (stats) stats->layers.clear();
    for (std::size_t i = 0; i < f.layers.size(); ++i) {
        const auto& cl = f.layers[i];
        LayerStats ls{i + 1, cl.kind, nesting_depth(cl), 0, 0, 0};
        LayerStats* lp = stats ? &ls : nullptr;
        if (cl.kind == Clause::Kind::Define) {
            detail::solve_define(cl, f.universe, f.functions, rho, lp);
        } else {
            auto d = dualize(cl, f.relations);
            detail::solve_define(d.complement, f.universe, f.functions, rho, lp);
            Clause restore = Clause::define(Body::conj(d.restore.body, d.closure.body));
            detail::solve_define(restore, f.universe, f.functions, rho, lp);
            for (const auto& rel : asserted_relations(cl)) rho.erase(complement_symbol(rel));
        }
        if (stats) stats->layers.push_back(ls);
    }
    return rho;
}

}  // namespace lfp
