#pragma once

// CTL over finite Kripke structures: a compiler to one layer per
// subformula and an explicit-state checker.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lfp/engine.hpp"
#include "lfp/model.hpp"

namespace lfp {

/// Finite transition system without terminal states. States are indices
/// into `states`.
struct Kripke {
    std::vector<std::string> states;
    std::set<std::pair<std::size_t, std::size_t>> transitions;
    std::map<std::string, std::set<std::size_t>> labels;
    std::vector<std::size_t> initial;

    std::optional<std::size_t> find(std::string_view name) const {
        for (std::size_t s = 0; s < states.size(); ++s) {
            if (states[s] == name) return s;
        }
        return std::nullopt;
    }
};

inline void validate(const Kripke& ts) {
    if (ts.states.empty()) throw Error("kripke: no states");
    std::set<std::string> names(ts.states.begin(), ts.states.end());
    if (names.size() != ts.states.size()) throw Error("kripke: duplicate state");
    std::vector<bool> has_succ(ts.states.size(), false);
    for (const auto& [s, t] : ts.transitions) {
        if (s >= ts.states.size() || t >= ts.states.size()) throw Error("kripke: transition on unknown state");
        has_succ[s] = true;
    }
    for (std::size_t s = 0; s < ts.states.size(); ++s) {
        if (!has_succ[s]) throw Error("kripke: state '" + ts.states[s] + "' has no successor");
    }
    for (const auto& [p, ss] : ts.labels) {
        for (auto s : ss) {
            if (s >= ts.states.size()) throw Error("kripke: label '" + p + "' on unknown state");
        }
    }
    for (auto s : ts.initial) {
        if (s >= ts.states.size()) throw Error("kripke: unknown initial state");
    }
}

/// CTL state formula. EF, AF, disjunction and false are not primitive;
/// parse_ctl rewrites them into this core.
struct Ctl {
    enum class Kind { True, Prop, Not, And, EX, AX, EU, AU, EG, AG };
    Kind kind = Kind::True;
    std::string prop;
    std::vector<Ctl> sub;

    static Ctl truth() { return {Kind::True, {}, {}}; }
    static Ctl atom(std::string p) { return {Kind::Prop, std::move(p), {}}; }
    static Ctl unary(Kind k, Ctl a) { return {k, {}, {std::move(a)}}; }
    static Ctl binary(Kind k, Ctl a, Ctl b) { return {k, {}, {std::move(a), std::move(b)}}; }
    static Ctl negate(Ctl a) { return unary(Kind::Not, std::move(a)); }
    static Ctl conj(Ctl a, Ctl b) { return binary(Kind::And, std::move(a), std::move(b)); }
    static Ctl disj(Ctl a, Ctl b) { return negate(conj(negate(std::move(a)), negate(std::move(b)))); }
    static Ctl ef(Ctl a) { return binary(Kind::EU, truth(), std::move(a)); }
    static Ctl af(Ctl a) { return binary(Kind::AU, truth(), std::move(a)); }

    bool operator==(const Ctl&) const = default;
};

/// Number of nodes in the formula tree.
inline std::size_t size(const Ctl& phi) {
    std::size_t n = 1;
    for (const auto& s : phi.sub) n += size(s);
    return n;
}

inline std::size_t depth(const Ctl& phi) {
    std::size_t d = 0;
    for (const auto& s : phi.sub) d = std::max(d, depth(s));
    return d + 1;
}

inline std::string to_string(const Ctl& phi) {
    using K = Ctl::Kind;
    switch (phi.kind) {
    case K::True: return "true";
    case K::Prop: return phi.prop;
    case K::Not: return "!" + to_string(phi.sub[0]);
    case K::And: return "(" + to_string(phi.sub[0]) + " & " + to_string(phi.sub[1]) + ")";
    case K::EX: return "EX " + to_string(phi.sub[0]);
    case K::AX: return "AX " + to_string(phi.sub[0]);
    case K::EG: return "EG " + to_string(phi.sub[0]);
    case K::AG: return "AG " + to_string(phi.sub[0]);
    case K::EU: return "E[" + to_string(phi.sub[0]) + " U " + to_string(phi.sub[1]) + "]";
    case K::AU: return "A[" + to_string(phi.sub[0]) + " U " + to_string(phi.sub[1]) + "]";
    }
    return {};
}

namespace detail {

class CtlParser {
public:
    explicit CtlParser(std::string_view src) : src_(src) {}

    Ctl parse() {
        auto phi = disjunction();
        skip();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return phi;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw Error("ctl formula, column " + std::to_string(pos_ + 1) + ": " + what);
    }
    void skip() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool accept(std::string_view p) {
        skip();
        if (src_.substr(pos_, p.size()) != p) return false;
        pos_ += p.size();
        return true;
    }
    void expect(std::string_view p) {
        if (!accept(p)) fail("expected '" + std::string(p) + "'");
    }
    static bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
    std::string peek_word() {
        skip();
        std::size_t j = pos_;
        while (j < src_.size() && word_char(src_[j])) ++j;
        return std::string(src_.substr(pos_, j - pos_));
    }

    Ctl disjunction() {
        auto phi = conjunction();
        while (accept("|")) phi = Ctl::disj(std::move(phi), conjunction());
        return phi;
    }
    Ctl conjunction() {
        auto phi = unary();
        while (accept("&")) phi = Ctl::conj(std::move(phi), unary());
        return phi;
    }
    Ctl until(Ctl::Kind k) {
        expect("[");
        auto lhs = disjunction();
        skip();
        if (peek_word() != "U") fail("expected 'U'");
        pos_ += 1;
        auto rhs = disjunction();
        expect("]");
        return Ctl::binary(k, std::move(lhs), std::move(rhs));
    }
    Ctl unary() {
        if (accept("!")) return Ctl::negate(unary());
        if (accept("(")) {
            auto phi = disjunction();
            expect(")");
            return phi;
        }
        auto w = peek_word();
        if (w.empty()) fail(pos_ < src_.size() ? "unexpected '" + std::string(1, src_[pos_]) + "'" : "unexpected end");
        pos_ += w.size();
        using K = Ctl::Kind;
        if (w == "true") return Ctl::truth();
        if (w == "false") return Ctl::negate(Ctl::truth());
        if (w == "EX") return Ctl::unary(K::EX, unary());
        if (w == "AX") return Ctl::unary(K::AX, unary());
        if (w == "EG") return Ctl::unary(K::EG, unary());
        if (w == "AG") return Ctl::unary(K::AG, unary());
        if (w == "EF") return Ctl::ef(unary());
        if (w == "AF") return Ctl::af(unary());
        if (w == "E") return until(K::EU);
        if (w == "A") return until(K::AU);
        if (w == "U") fail("unexpected 'U'");
        return Ctl::atom(w);
    }
};

}  // namespace detail

/// Grammar, loosest first: `|`, `&`, then prefix `!`, `EX`, `AX`, `EF`, `AF`,
/// `EG`, `AG`, `E[f U g]`, `A[f U g]`, parentheses, `true`, `false` and
/// atomic propositions.
inline Ctl parse_ctl(std::string_view src) { return detail::CtlParser(src).parse(); }

/// Compiled formula: the layered program and the relation holding the
/// states that satisfy the whole formula.
struct CtlProgram {
    LayeredFormula formula;
    std::string relation;
};

inline std::string label_relation(const std::string& prop) { return "L_" + prop; }

inline CtlProgram ctl_compile(const Ctl& phi, const Kripke& ts) {
    validate(ts);
    CtlProgram out;
    auto& f = out.formula;
    f.universe = Universe::symbolic(ts.states);
    f.relations["T"] = 2;
    f.facts.declare("T");
    for (const auto& [s, t] : ts.transitions) f.facts.insert("T", {static_cast<AtomId>(s), static_cast<AtomId>(t)});
    for (const auto& [p, ss] : ts.labels) {
        const auto L = label_relation(p);
        f.relations[L] = 1;
        f.facts.declare(L);
        for (auto s : ss) f.facts.insert(L, {static_cast<AtomId>(s)});
    }

    const auto s = Term::var("s");
    const auto s2 = Term::var("t");
    auto q = [](const std::string& r, const Term& t) { return Condition::query(r, {t}); };
    auto every = [&](Condition c, const std::string& r) { return Body::forall("s", Body::implies(std::move(c), Assertion{r, {s}})); };
    // exists t: T(s, t) & R(t)
    auto some_succ = [&](const std::string& r) {
        return Condition::exists("t", Condition::conj(Condition::query("T", {s, s2}), q(r, s2)));
    };
    // forall t: !T(s, t) | R(t)
    auto all_succ = [&](const std::string& r) {
        return Condition::forall("t", Condition::disj(Condition::neg_query("T", {s, s2}), q(r, s2)));
    };

    std::size_t next = 0;
    auto compile = [&](auto&& self, const Ctl& psi) -> std::string {
        std::vector<std::string> subs;
        for (const auto& c : psi.sub) subs.push_back(self(self, c));
        const auto sat = "sat" + std::to_string(next++);
        f.relations[sat] = 1;
        using K = Ctl::Kind;
        switch (psi.kind) {
        case K::True: f.layers.push_back(Clause::define(every(Condition::truth(), sat))); break;
        case K::Prop: {
            const auto L = label_relation(psi.prop);
            if (!f.relations.contains(L)) throw Error("ctl: unknown atomic proposition '" + psi.prop + "'");
            f.layers.push_back(Clause::define(every(q(L, s), sat)));
            break;
        }
        case K::And: f.layers.push_back(Clause::define(every(Condition::conj(q(subs[0], s), q(subs[1], s)), sat))); break;
        case K::Not: f.layers.push_back(Clause::define(every(Condition::neg_query(subs[0], {s}), sat))); break;
        case K::EX: f.layers.push_back(Clause::define(every(some_succ(subs[0]), sat))); break;
        case K::AX: f.layers.push_back(Clause::define(every(all_succ(subs[0]), sat))); break;
        case K::EU:
            f.layers.push_back(Clause::define(
                Body::conj(every(q(subs[1], s), sat), every(Condition::conj(q(subs[0], s), some_succ(sat)), sat))));
            break;
        case K::AU:
            f.layers.push_back(Clause::define(
                Body::conj(every(q(subs[1], s), sat), every(Condition::conj(q(subs[0], s), all_succ(sat)), sat))));
            break;
        case K::EG:
            f.layers.push_back(Clause::constrain(Body::conj(every(q(subs[0], s), sat), every(some_succ(sat), sat))));
            break;
        case K::AG:
            f.layers.push_back(Clause::constrain(Body::conj(every(q(subs[0], s), sat), every(all_succ(sat), sat))));
            break;
        }
        return sat;
    };
    out.relation = compile(compile, phi);
    return out;
}

inline std::set<std::size_t> ctl_solve(const Ctl& phi, const Kripke& ts) {
    auto prog = ctl_compile(phi, ts);
    auto rho = solve(prog.formula);
    std::set<std::size_t> out;
    for (const auto& t : rho.tuples(prog.relation)) out.insert(t[0]);
    return out;
}

/// Global model checking by explicit image computation: least fixed points
/// from below for the until operators, greatest from above for EG and AG.
inline std::set<std::size_t> ctl_oracle(const Ctl& phi, const Kripke& ts) {
    validate(ts);
    const std::size_t n = ts.states.size();
    std::vector<std::vector<std::size_t>> succ(n);
    for (const auto& [s, t] : ts.transitions) succ[s].push_back(t);
    std::set<std::size_t> all;
    for (std::size_t s = 0; s < n; ++s) all.insert(s);

    auto pre_some = [&](const std::set<std::size_t>& z) {
        std::set<std::size_t> out;
        for (std::size_t s = 0; s < n; ++s) {
            for (auto t : succ[s]) {
                if (z.contains(t)) {
                    out.insert(s);
                    break;
                }
            }
        }
        return out;
    };
    auto pre_all = [&](const std::set<std::size_t>& z) {
        std::set<std::size_t> out;
        for (std::size_t s = 0; s < n; ++s) {
            bool ok = true;
            for (auto t : succ[s]) ok = ok && z.contains(t);
            if (ok) out.insert(s);
        }
        return out;
    };
    auto meet = [](const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
        std::set<std::size_t> out;
        for (auto x : a) {
            if (b.contains(x)) out.insert(x);
        }
        return out;
    };
    auto iterate = [](std::set<std::size_t> z, const auto& step) {
        for (;;) {
            auto next = step(z);
            if (next == z) return z;
            z = std::move(next);
        }
    };

    auto sat = [&](auto&& self, const Ctl& psi) -> std::set<std::size_t> {
        using K = Ctl::Kind;
        switch (psi.kind) {
        case K::True: return all;
        case K::Prop: {
            auto it = ts.labels.find(psi.prop);
            if (it == ts.labels.end()) throw Error("ctl: unknown atomic proposition '" + psi.prop + "'");
            return it->second;
        }
        case K::Not: {
            auto a = self(self, psi.sub[0]);
            std::set<std::size_t> out;
            for (auto s : all) {
                if (!a.contains(s)) out.insert(s);
            }
            return out;
        }
        case K::And: return meet(self(self, psi.sub[0]), self(self, psi.sub[1]));
        case K::EX: return pre_some(self(self, psi.sub[0]));
        case K::AX: return pre_all(self(self, psi.sub[0]));
        case K::EU:
        case K::AU: {
            auto a = self(self, psi.sub[0]);
            auto b = self(self, psi.sub[1]);
            const bool e = psi.kind == K::EU;
            return iterate(std::set<std::size_t>{}, [&](const std::set<std::size_t>& z) {
                auto out = meet(a, e ? pre_some(z) : pre_all(z));
                out.insert(b.begin(), b.end());
                return out;
            });
        }
        case K::EG:
        case K::AG: {
            auto a = self(self, psi.sub[0]);
            const bool e = psi.kind == K::EG;
            return iterate(all, [&](const std::set<std::size_t>& z) { return meet(a, e ? pre_some(z) : pre_all(z)); });
        }
        }
        return {};
    };
    return sat(sat, phi);
}

/// Two-process Bakery algorithm with tickets clamped to 0..bound. A state
/// is (l1, l2, x1, x2) with locations 1 (idle), 2 (waiting), 3 (critical);
/// only states reachable from (1, 1, 0, 0) are built. Labels crit1, crit2
/// mark the critical locations.
inline Kripke bakery(int bound) {
    if (bound < 2) throw Error("bakery: ticket bound must be at least 2");
    struct State {
        int l1, l2, x1, x2;
        auto operator<=>(const State&) const = default;
    };
    auto name = [](const State& s) {
        return "s" + std::to_string(s.l1) + std::to_string(s.l2) + "_" + std::to_string(s.x1) + "_" + std::to_string(s.x2);
    };
    auto moves = [bound](const State& s) {
        std::vector<State> out;
        // process 1
        if (s.l1 == 1) out.push_back({2, s.l2, std::min(s.x2 + 1, bound), s.x2});
        if (s.l1 == 2) out.push_back((s.x2 == 0 || s.x1 < s.x2) ? State{3, s.l2, s.x1, s.x2} : s);
        if (s.l1 == 3) out.push_back({1, s.l2, 0, s.x2});
        // process 2
        if (s.l2 == 1) out.push_back({s.l1, 2, s.x1, std::min(s.x1 + 1, bound)});
        if (s.l2 == 2) out.push_back((s.x1 == 0 || s.x2 < s.x1) ? State{s.l1, 3, s.x1, s.x2} : s);
        if (s.l2 == 3) out.push_back({s.l1, 1, s.x1, 0});
        return out;
    };

    Kripke ts;
    std::map<State, std::size_t> index;
    std::vector<State> order;
    auto add = [&](const State& s) {
        auto [it, fresh] = index.emplace(s, order.size());
        if (fresh) {
            order.push_back(s);
            ts.states.push_back(name(s));
        }
        return it->second;
    };
    ts.initial.push_back(add({1, 1, 0, 0}));
    ts.labels["crit1"];
    ts.labels["crit2"];
    for (std::size_t k = 0; k < order.size(); ++k) {
        const State s = order[k];
        for (const auto& t : moves(s)) ts.transitions.emplace(k, add(t));
        if (s.l1 == 3) ts.labels["crit1"].insert(k);
        if (s.l2 == 3) ts.labels["crit2"].insert(k);
    }
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (moves(order[k]).empty()) ts.transitions.emplace(k, k);
    }
    return ts;
}

}  // namespace lfp
