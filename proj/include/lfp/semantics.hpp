#pragma once

// Direct, exhaustive implementation of the satisfaction relations. Used as
// ground truth in tests and by the `oracle` command; never used to solve.

#include <vector>

#include "lfp/model.hpp"
#include "lfp/stratify.hpp"

namespace lfp {

inline bool sat_cond(const Interpretation& rho, const Universe& u, const FunctionEnv& fns, Valuation& val,
                     const Condition& c) {
    using K = Condition::Kind;
    switch (c.kind) {
    case K::Query: {
        auto t = eval_terms(c.args, fns, u, val);
        return t && rho.contains(c.name, *t);
    }
    case K::NegQuery: {
        auto t = eval_terms(c.args, fns, u, val);
        return !t || !rho.contains(c.name, *t);
    }
    case K::And: return sat_cond(rho, u, fns, val, c.lhs()) && sat_cond(rho, u, fns, val, c.rhs());
    case K::Or: return sat_cond(rho, u, fns, val, c.lhs()) || sat_cond(rho, u, fns, val, c.rhs());
    case K::Exists:
    case K::Forall: {
        const bool want = c.kind == K::Exists;
        val.push(c.name, 0);
        bool result = !want;
        for (AtomId a = 0; a < u.size(); ++a) {
            val.set_top(a);
            if (sat_cond(rho, u, fns, val, c.body()) == want) {
                result = want;
                break;
            }
        }
        val.pop();
        return result;
    }
    case K::True: return true;
    case K::False: return false;
    }
    return false;
}

inline bool sat_cond(const Interpretation& rho, const Universe& u, Valuation val, const Condition& c) {
    return sat_cond(rho, u, FunctionEnv{}, val, c);
}

inline bool sat_body(const Interpretation& rho, const Universe& u, const FunctionEnv& fns, Valuation& val,
                     Clause::Kind kind, const Body& b) {
    switch (b.kind) {
    case Body::Kind::Implies: {
        auto head = eval_terms(b.head.args, fns, u, val);
        if (!head) return true;  // undefined head: vacuous instance
        const bool in = rho.contains(b.head.relation, *head);
        if (kind == Clause::Kind::Define) return in || !sat_cond(rho, u, fns, val, b.cond);
        return !in || sat_cond(rho, u, fns, val, b.cond);
    }
    case Body::Kind::Forall: {
        val.push(b.var, 0);
        bool ok = true;
        for (AtomId a = 0; a < u.size() && ok; ++a) {
            val.set_top(a);
            ok = sat_body(rho, u, fns, val, kind, b.children[0]);
        }
        val.pop();
        return ok;
    }
    case Body::Kind::And:
        return sat_body(rho, u, fns, val, kind, b.children[0]) && sat_body(rho, u, fns, val, kind, b.children[1]);
    }
    return false;
}

inline bool sat_clause(const Interpretation& rho, const Universe& u, const FunctionEnv& fns, Valuation val,
                       const Clause& cl) {
    return sat_body(rho, u, fns, val, cl.kind, cl.body);
}

/// Satisfaction of each layer in order.
inline std::vector<bool> sat_layers(const Interpretation& rho, const LayeredFormula& f) {
    std::vector<bool> out;
    out.reserve(f.layers.size());
    for (const auto& cl : f.layers) out.push_back(sat_clause(rho, f.universe, f.functions, {}, cl));
    return out;
}

/// rho contains the rank-0 facts.
inline bool covers_facts(const Interpretation& rho, const LayeredFormula& f) {
    for (const auto& [rel, ts] : f.facts.relations()) {
        const auto& have = rho.tuples(rel);
        for (const auto& t : ts) {
            if (!have.contains(t)) return false;
        }
    }
    return true;
}

/// All layers hold and rho contains the facts.
inline bool sat_formula(const Interpretation& rho, const LayeredFormula& f) {
    if (!covers_facts(rho, f)) return false;
    for (const auto& cl : f.layers) {
        if (!sat_clause(rho, f.universe, f.functions, {}, cl)) return false;
    }
    return true;
}

}  // namespace lfp
