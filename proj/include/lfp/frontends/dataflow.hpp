#pragma once

// Bit-vector dataflow analyses as single-layer programs, and a classical
// round-robin solver for the same equations.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lfp/engine.hpp"
#include "lfp/model.hpp"

namespace lfp {

enum class Direction { Forward, Backward };
enum class Modality { May, Must };

/// Control flow graph with per-node kill/gen sets over a finite item set.
/// The entry node has no incoming edges, the exit node no outgoing ones.
struct Cfg {
    std::vector<std::string> nodes;
    std::vector<std::string> items;
    std::vector<std::pair<std::string, std::string>> edges;
    std::string entry;
    std::string exit;
    std::map<std::string, std::set<std::string>> kill;
    std::map<std::string, std::set<std::string>> gen;
    std::set<std::string> iota;
};

/// Analysis result: node -> items holding at that node.
using DataflowSolution = std::map<std::string, std::set<std::string>>;

inline void validate(const Cfg& cfg) {
    std::set<std::string> nodes(cfg.nodes.begin(), cfg.nodes.end());
    std::set<std::string> items(cfg.items.begin(), cfg.items.end());
    if (nodes.size() != cfg.nodes.size()) throw Error("cfg: duplicate node");
    if (items.size() != cfg.items.size()) throw Error("cfg: duplicate item");
    for (const auto& n : cfg.nodes) {
        if (items.contains(n)) throw Error("cfg: '" + n + "' is both a node and an item");
    }
    if (cfg.entry.empty() || !nodes.contains(cfg.entry)) throw Error("cfg: missing entry node");
    if (cfg.exit.empty() || !nodes.contains(cfg.exit)) throw Error("cfg: missing exit node");
    for (const auto& [s, t] : cfg.edges) {
        if (!nodes.contains(s) || !nodes.contains(t)) throw Error("cfg: edge mentions an undeclared node");
        if (t == cfg.entry) throw Error("cfg: entry node '" + cfg.entry + "' has an incoming edge");
        if (s == cfg.exit) throw Error("cfg: exit node '" + cfg.exit + "' has an outgoing edge");
    }
    auto check_sets = [&](const std::map<std::string, std::set<std::string>>& m, const char* what) {
        for (const auto& [n, xs] : m) {
            if (!nodes.contains(n)) throw Error(std::string("cfg: ") + what + " for undeclared node '" + n + "'");
            for (const auto& x : xs) {
                if (!items.contains(x)) throw Error(std::string("cfg: ") + what + " mentions undeclared item '" + x + "'");
            }
        }
    };
    check_sets(cfg.kill, "kill");
    check_sets(cfg.gen, "gen");
    for (const auto& x : cfg.iota) {
        if (!items.contains(x)) throw Error("cfg: iota mentions undeclared item '" + x + "'");
    }
}

/// Encodes the analysis as one layer over the universe nodes + items. May
/// analyses are define layers, must analyses constrain layers; `A(n, x)`
/// holds when item x is in the analysis result at node n. Edges, node and
/// item sets, kill, gen and iota are facts.
inline LayeredFormula dataflow_formula(const Cfg& cfg, Direction dir, Modality mod) {
    validate(cfg);
    std::vector<std::string> atoms = cfg.nodes;
    atoms.insert(atoms.end(), cfg.items.begin(), cfg.items.end());

    LayeredFormula f;
    f.universe = Universe::symbolic(atoms);
    f.relations = {{"A", 2}, {"edge", 2}, {"kill", 2}, {"gen", 2}, {"iota", 1}, {"node", 1}, {"item", 1}};
    for (const auto& [rel, _] : f.relations) f.facts.declare(rel);
    f.facts.erase("A");

    auto id = [&](const std::string& name) { return *f.universe.find(name); };
    for (const auto& n : cfg.nodes) f.facts.insert("node", {id(n)});
    for (const auto& x : cfg.items) f.facts.insert("item", {id(x)});
    for (const auto& x : cfg.iota) f.facts.insert("iota", {id(x)});
    for (const auto& [s, t] : cfg.edges) f.facts.insert("edge", {id(s), id(t)});
    for (const auto& [n, xs] : cfg.kill) {
        for (const auto& x : xs) f.facts.insert("kill", {id(n), id(x)});
    }
    for (const auto& [n, xs] : cfg.gen) {
        for (const auto& x : xs) f.facts.insert("gen", {id(n), id(x)});
    }

    const auto x = Term::var("x");
    auto node = [&](const std::string& n) { return Term::constant(id(n)); };
    auto A = [&](const std::string& n) { return std::vector<Term>{node(n), x}; };
    // (A(from, x) & !kill(at, x)) | gen(at, x)
    auto transfer = [&](const std::string& from, const std::string& at) {
        return Condition::disj(Condition::conj(Condition::query("A", A(from)), Condition::neg_query("kill", A(at))),
                               Condition::query("gen", A(at)));
    };

    const bool forward = dir == Direction::Forward;
    const std::string& extremal = forward ? cfg.entry : cfg.exit;
    // Both modalities share one body shape; a define clause reads it as
    // `cond => head`, a constrain clause as `head => cond`.
    std::vector<Body> parts;
    parts.push_back(Body::forall("x", Body::implies(Condition::query("iota", {x}), Assertion{"A", A(extremal)})));
    for (const auto& [s, t] : cfg.edges) {
        const auto& from = forward ? s : t;
        const auto& to = forward ? t : s;
        parts.push_back(Body::forall("x", Body::implies(transfer(from, to), Assertion{"A", A(to)})));
    }
    if (mod == Modality::May) {
        f.layers.push_back(Clause::define(conj_all(std::move(parts))));
    } else {
        // A ranges over node x item only
        const auto n = Term::var("n");
        parts.push_back(Body::forall(
            "n", Body::forall("x", Body::implies(Condition::conj(Condition::query("node", {n}), Condition::query("item", {x})),
                                                 Assertion{"A", {n, x}}))));
        f.layers.push_back(Clause::constrain(conj_all(std::move(parts))));
    }
    return f;
}

/// Reads the analysis result from a solved interpretation of
/// dataflow_formula(cfg, ...).
inline DataflowSolution dataflow_extract(const Cfg& cfg, const LayeredFormula& f, const Interpretation& rho) {
    DataflowSolution out;
    for (const auto& n : cfg.nodes) out[n];
    std::set<std::string> nodes(cfg.nodes.begin(), cfg.nodes.end());
    std::set<std::string> items(cfg.items.begin(), cfg.items.end());
    for (const auto& t : rho.tuples("A")) {
        auto n = f.universe.name(t[0]);
        auto x = f.universe.name(t[1]);
        if (nodes.contains(n) && items.contains(x)) out[n].insert(x);
    }
    return out;
}

inline DataflowSolution dataflow_solve(const Cfg& cfg, Direction dir, Modality mod) {
    auto f = dataflow_formula(cfg, dir, mod);
    return dataflow_extract(cfg, f, solve(f));
}

/// Round-robin iteration of the dataflow equations: the extremal node gets
/// iota, every other node combines the transfer of its neighbours (union
/// from the empty set for may, intersection from all items for must).
inline DataflowSolution dataflow_oracle(const Cfg& cfg, Direction dir, Modality mod) {
    validate(cfg);
    const bool forward = dir == Direction::Forward;
    const bool may = mod == Modality::May;
    const std::string& extremal = forward ? cfg.entry : cfg.exit;
    const std::set<std::string> all(cfg.items.begin(), cfg.items.end());

    std::map<std::string, std::vector<std::string>> sources;  // nodes whose value flows into n
    for (const auto& [s, t] : cfg.edges) {
        if (forward) sources[t].push_back(s);
        else sources[s].push_back(t);
    }
    auto lookup = [](const std::map<std::string, std::set<std::string>>& m, const std::string& n) {
        auto it = m.find(n);
        return it == m.end() ? std::set<std::string>{} : it->second;
    };

    DataflowSolution a;
    for (const auto& n : cfg.nodes) a[n] = may ? std::set<std::string>{} : all;
    a[extremal] = cfg.iota;

    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& n : cfg.nodes) {
            if (n == extremal) continue;
            const auto kill = lookup(cfg.kill, n);
            const auto gen = lookup(cfg.gen, n);
            std::set<std::string> acc = may ? std::set<std::string>{} : all;
            for (const auto& m : sources[n]) {
                std::set<std::string> out;
                std::set_difference(a[m].begin(), a[m].end(), kill.begin(), kill.end(), std::inserter(out, out.end()));
                out.insert(gen.begin(), gen.end());
                if (may) {
                    acc.insert(out.begin(), out.end());
                } else {
                    std::set<std::string> both;
                    std::set_intersection(acc.begin(), acc.end(), out.begin(), out.end(), std::inserter(both, both.end()));
                    acc = std::move(both);
                }
            }
            if (acc != a[n]) {
                a[n] = std::move(acc);
                changed = true;
            }
        }
    }
    return a;
}

}  // namespace lfp
