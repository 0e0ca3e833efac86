#pragma once

// Binary constraint networks: arc consistency as a constrain layer, and an
// AC-3 reference implementation.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lfp/engine.hpp"
#include "lfp/model.hpp"

namespace lfp {

/// A binary constraint between variables i and j (i == j for unary ones).
/// Difference means lo <= x_j - x_i <= hi; Range means lo <= x_i <= hi.
struct CspConstraint {
    enum class Kind { Table, Difference, Range };
    Kind kind = Kind::Table;
    std::size_t i = 0;
    std::size_t j = 0;
    std::set<std::pair<std::string, std::string>> tuples;
    long lo = 0;
    long hi = 0;

    static CspConstraint table(std::size_t i, std::size_t j, std::set<std::pair<std::string, std::string>> ts) {
        return {Kind::Table, i, j, std::move(ts), 0, 0};
    }
    static CspConstraint difference(std::size_t i, std::size_t j, long lo, long hi) {
        return {Kind::Difference, i, j, {}, lo, hi};
    }
    static CspConstraint range(std::size_t i, long lo, long hi) { return {Kind::Range, i, i, {}, lo, hi}; }
};

struct Csp {
    std::vector<std::string> variables;
    std::vector<std::vector<std::string>> domains;  // parallel to variables
    std::vector<CspConstraint> constraints;
};

/// Reduced domains, parallel to Csp::variables, each in declaration order.
using CspSolution = std::vector<std::vector<std::string>>;

/// Tables lists every allowed pair as a fact. Functions keeps difference and
/// range constraints symbolic: a define layer enumerates the allowed
/// differences and the constraint queries them through `sub`.
enum class CspEncoding { Tables, Functions };

namespace detail {

inline bool is_int_literal(const std::string& s) {
    std::size_t i = s.starts_with('-') ? 1 : 0;
    if (i == s.size() || s.size() - i > 12) return false;
    if (s[i] == '0' && s.size() - i > 1) return false;
    return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace detail

/// True when every domain value is an integer literal, which is what
/// difference and range constraints and the functions encoding need.
inline bool csp_is_integer(const Csp& csp) {
    for (const auto& d : csp.domains) {
        for (const auto& v : d) {
            if (!detail::is_int_literal(v)) return false;
        }
    }
    return true;
}

inline void validate(const Csp& csp) {
    if (csp.variables.empty()) throw Error("csp: no variables");
    if (csp.domains.size() != csp.variables.size()) throw Error("csp: every variable needs a domain");
    std::set<std::string> names;
    for (std::size_t v = 0; v < csp.variables.size(); ++v) {
        if (!names.insert(csp.variables[v]).second) throw Error("csp: duplicate variable '" + csp.variables[v] + "'");
        std::set<std::string> seen;
        for (const auto& x : csp.domains[v]) {
            if (!seen.insert(x).second) throw Error("csp: duplicate value '" + x + "' in domain of " + csp.variables[v]);
        }
    }
    const bool integer = csp_is_integer(csp);
    for (const auto& c : csp.constraints) {
        if (c.i >= csp.variables.size() || c.j >= csp.variables.size()) throw Error("csp: constraint on unknown variable");
        if (c.kind != CspConstraint::Kind::Table && !integer)
            throw Error("csp: difference and range constraints need integer domains");
        if (c.kind != CspConstraint::Kind::Table && c.lo > c.hi) throw Error("csp: empty interval in constraint");
    }
}

/// Lowers every constraint to the explicit set of allowed value pairs
/// within the declared domains.
inline std::set<std::pair<std::string, std::string>> allowed_pairs(const Csp& csp, const CspConstraint& c) {
    if (c.kind == CspConstraint::Kind::Table) return c.tuples;
    std::set<std::pair<std::string, std::string>> out;
    if (c.kind == CspConstraint::Kind::Range) {
        for (const auto& a : csp.domains[c.i]) {
            const long v = std::stol(a);
            if (c.lo <= v && v <= c.hi) out.emplace(a, a);
        }
        return out;
    }
    for (const auto& a : csp.domains[c.i]) {
        for (const auto& b : csp.domains[c.j]) {
            const long d = std::stol(b) - std::stol(a);
            if (c.lo <= d && d <= c.hi) out.emplace(a, b);
        }
    }
    return out;
}

/// Relation holding the reduced domain of variable v.
inline std::string domain_relation(const Csp& csp, std::size_t v) { return "D_" + csp.variables[v]; }

inline LayeredFormula csp_formula(const Csp& csp, CspEncoding enc) {
    validate(csp);
    const bool integer = csp_is_integer(csp);
    const bool functions = enc == CspEncoding::Functions;

    LayeredFormula f;
    if (integer) {
        long lo = 0, hi = 0;
        bool first = true;
        auto widen = [&](long v) {
            lo = first ? v : std::min(lo, v);
            hi = first ? v : std::max(hi, v);
            first = false;
        };
        for (const auto& d : csp.domains) {
            for (const auto& v : d) widen(std::stol(v));
        }
        if (functions) {
            for (const auto& c : csp.constraints) {
                if (c.kind == CspConstraint::Kind::Difference) {
                    widen(c.lo);
                    widen(c.hi);
                }
            }
        }
        f.universe = first ? Universe::range(0, 0) : Universe::range(lo, hi);
    } else {
        std::vector<std::string> atoms;
        std::set<std::string> seen;
        for (const auto& d : csp.domains) {
            for (const auto& v : d) {
                if (seen.insert(v).second) atoms.push_back(v);
            }
        }
        if (atoms.empty()) atoms.push_back("none");
        f.universe = Universe::symbolic(std::move(atoms));
    }
    const auto& u = f.universe;

    const auto x = Term::var("x");
    const auto y = Term::var("y");
    std::vector<Body> defs;
    std::vector<Body> cons;

    for (std::size_t v = 0; v < csp.variables.size(); ++v) {
        const auto dom = "dom_" + csp.variables[v];
        const auto D = domain_relation(csp, v);
        f.relations[dom] = 1;
        f.relations[D] = 1;
        f.facts.declare(dom);
        for (const auto& a : csp.domains[v]) f.facts.insert(dom, {*u.find(a)});
        cons.push_back(Body::forall("x", Body::implies(Condition::query(dom, {x}), Assertion{D, {x}})));
    }

    // D_i(x) => exists y: D_j(y) & allowed(x, y), and the same from the j side
    auto arcs = [&](std::size_t i, std::size_t j, const auto& allowed) {
        const auto Di = domain_relation(csp, i);
        const auto Dj = domain_relation(csp, j);
        cons.push_back(Body::forall(
            "x", Body::implies(Condition::exists("y", Condition::conj(Condition::query(Dj, {y}), allowed())),
                               Assertion{Di, {x}})));
        cons.push_back(Body::forall(
            "y", Body::implies(Condition::exists("x", Condition::conj(Condition::query(Di, {x}), allowed())),
                               Assertion{Dj, {y}})));
    };

    for (std::size_t k = 0; k < csp.constraints.size(); ++k) {
        const auto& c = csp.constraints[k];
        const auto id = std::to_string(k);
        if (!functions || c.kind == CspConstraint::Kind::Table) {
            const auto C = "C" + id;
            f.relations[C] = 2;
            f.facts.declare(C);
            for (const auto& [a, b] : allowed_pairs(csp, c)) {
                auto ia = u.find(a), ib = u.find(b);
                if (ia && ib) f.facts.insert(C, {*ia, *ib});
            }
            arcs(c.i, c.j, [&] { return Condition::query(C, {x, y}); });
        } else if (c.kind == CspConstraint::Kind::Difference) {
            const auto C = "Cd" + id;
            f.relations[C] = 1;
            for (long d = c.lo; d <= c.hi; ++d)
                defs.push_back(Body::implies(Condition::truth(), Assertion{C, {Term::constant(*u.of_value(d))}}));
            arcs(c.i, c.j, [&] { return Condition::query(C, {Term::apply("sub", {y, x})}); });
        } else {
            const auto C = "Cr" + id;
            f.relations[C] = 1;
            for (long d = std::max(c.lo, u.lower()); d <= std::min(c.hi, u.upper()); ++d)
                defs.push_back(Body::implies(Condition::truth(), Assertion{C, {Term::constant(*u.of_value(d))}}));
            const auto Di = domain_relation(csp, c.i);
            cons.push_back(Body::forall("x", Body::implies(Condition::query(C, {x}), Assertion{Di, {x}})));
        }
    }

    if (!defs.empty()) f.layers.push_back(Clause::define(conj_all(std::move(defs))));
    f.layers.push_back(Clause::constrain(conj_all(std::move(cons))));
    return f;
}

inline CspSolution csp_extract(const Csp& csp, const LayeredFormula& f, const Interpretation& rho) {
    CspSolution out(csp.variables.size());
    for (std::size_t v = 0; v < csp.variables.size(); ++v) {
        const auto& ts = rho.tuples(domain_relation(csp, v));
        for (const auto& a : csp.domains[v]) {
            if (ts.contains(Tuple{*f.universe.find(a)})) out[v].push_back(a);
        }
    }
    return out;
}

inline CspSolution csp_solve(const Csp& csp, CspEncoding enc = CspEncoding::Tables) {
    auto f = csp_formula(csp, enc);
    return csp_extract(csp, f, solve(f));
}

/// AC-3 run to its fixed point; a wiped-out domain does not stop the run,
/// so the result is the largest arc consistent sub-network.
inline CspSolution ac3(const Csp& csp) {
    validate(csp);
    const std::size_t n = csp.variables.size();
    std::vector<std::vector<bool>> live(n);
    std::vector<std::map<std::string, std::size_t>> index(n);
    for (std::size_t v = 0; v < n; ++v) {
        live[v].assign(csp.domains[v].size(), true);
        for (std::size_t k = 0; k < csp.domains[v].size(); ++k) index[v][csp.domains[v][k]] = k;
    }

    struct Arc {
        std::size_t from, to;  // revise `from` against `to`
        std::set<std::pair<std::size_t, std::size_t>> ok;  // (value of from, value of to)
    };
    std::vector<Arc> arcs;
    for (const auto& c : csp.constraints) {
        Arc fwd{c.i, c.j, {}}, bwd{c.j, c.i, {}};
        for (const auto& [a, b] : allowed_pairs(csp, c)) {
            auto ia = index[c.i].find(a);
            auto ib = index[c.j].find(b);
            if (ia == index[c.i].end() || ib == index[c.j].end()) continue;
            fwd.ok.emplace(ia->second, ib->second);
            bwd.ok.emplace(ib->second, ia->second);
        }
        arcs.push_back(std::move(fwd));
        arcs.push_back(std::move(bwd));
    }

    std::deque<std::size_t> queue;
    std::vector<bool> queued(arcs.size(), true);
    for (std::size_t k = 0; k < arcs.size(); ++k) queue.push_back(k);
    while (!queue.empty()) {
        const auto k = queue.front();
        queue.pop_front();
        queued[k] = false;
        const auto& arc = arcs[k];
        bool revised = false;
        for (std::size_t a = 0; a < live[arc.from].size(); ++a) {
            if (!live[arc.from][a]) continue;
            bool supported = false;
            for (std::size_t b = 0; b < live[arc.to].size() && !supported; ++b)
                supported = live[arc.to][b] && arc.ok.contains({a, b});
            if (!supported) {
                live[arc.from][a] = false;
                revised = true;
            }
        }
        if (!revised) continue;
        for (std::size_t m = 0; m < arcs.size(); ++m) {
            if (!queued[m] && (arcs[m].to == arc.from || arcs[m].from == arc.from)) {
                queued[m] = true;
                queue.push_back(m);
            }
        }
    }

    CspSolution out(n);
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t k = 0; k < live[v].size(); ++k) {
            if (live[v][k]) out[v].push_back(csp.domains[v][k]);
        }
    }
    return out;
}

}  // namespace lfp
