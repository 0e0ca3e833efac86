// One line per acceptance criterion; nonzero exit when any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "lfp/engine.hpp"
#include "lfp/formats.hpp"
#include "lfp/frontends/csp.hpp"
#include "lfp/frontends/ctl.hpp"
#include "lfp/frontends/dataflow.hpp"
#include "lfp/order.hpp"
#include "lfp/semantics.hpp"
#include "lfp/text.hpp"
#include "support/generators.hpp"

using namespace lfp;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

int failures = 0;

void report(int n, const char* name, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.ok) ++failures;
    std::printf("[%s] %d %s: %s (%.2fs)\n", o.ok ? "PASS" : "FAIL", n, name, o.detail.c_str(), secs);
    std::fflush(stdout);
}

constexpr int kRandomPrograms = 150;

std::vector<LayeredFormula> least_model_instances() {
    gen::Rng rng(2024);
    std::vector<LayeredFormula> out;
    for (int k = 0; k < kRandomPrograms; ++k) out.push_back(gen::random_program(rng));
    return out;
}

// ---------------------------------------------------------------------------

Outcome least_models() {
    Outcome o;
    std::size_t models = 0;
    for (const auto& f : least_model_instances()) {
        auto rho = solve(f);
        if (!sat_formula(rho, f)) o.fail("solution is not a model of\n" + print_program(f));
        auto ranks = check_stratification(f);
        for (const auto& m : gen::enumerate_models(f)) {
            ++models;
            if (!lex_leq(rho, m, ranks)) o.fail("solution not below an enumerated model of\n" + print_program(f));
        }
    }
    if (o.ok) o.detail = std::to_string(kRandomPrograms) + " programs, " + std::to_string(models) + " models compared";
    return o;
}

Outcome moore_family() {
    Outcome o;
    gen::Rng rng(7);
    std::size_t pairs = 0;
    for (const auto& f : least_model_instances()) {
        auto ranks = check_stratification(f);
        auto models = gen::enumerate_models(f);
        std::set<std::string> keys;
        for (const auto& m : models) keys.insert(print_model(m, f.universe));
        auto check_pair = [&](const Interpretation& a, const Interpretation& b) {
            ++pairs;
            std::vector<Interpretation> two{a, b};
            if (!keys.contains(print_model(meet(two, ranks, f), f.universe)))
                o.fail("meet of two models is not a model of\n" + print_program(f));
        };
        if (models.size() <= 48) {
            for (std::size_t i = 0; i < models.size(); ++i)
                for (std::size_t j = i + 1; j < models.size(); ++j) check_pair(models[i], models[j]);
        } else {
            for (int k = 0; k < 600; ++k)
                check_pair(models[gen::pick(rng, 0, models.size() - 1)], models[gen::pick(rng, 0, models.size() - 1)]);
        }
        if (meet(models, ranks, f) != solve(f)) o.fail("meet of all models differs from solve on\n" + print_program(f));
    }
    if (o.ok) o.detail = std::to_string(kRandomPrograms) + " programs, " + std::to_string(pairs) + " model pairs";
    return o;
}

Outcome order_laws() {
    Outcome o;
    gen::Rng rng(11);
    const std::map<std::string, std::size_t> ar{{"A", 1}, {"B", 1}, {"C", 1}};
    const auto all = gen::all_interpretations(ar, 2);
    auto any = [&] { return all[gen::pick(rng, 0, all.size() - 1)]; };
    int triples = 0, sets = 0;
    for (; triples < 2000; ++triples) {
        auto m = gen::random_ranks(rng, ar, gen::pick(rng, 1, 3));
        // bias towards comparable pairs so transitivity is exercised
        auto a = any(), b = gen::coin(rng, 0.3) ? a : any(), c = any();
        if (!lex_leq(a, a, m)) o.fail("not reflexive");
        if (lex_leq(a, b, m) && lex_leq(b, a, m) && a != b) o.fail("not antisymmetric");
        if (lex_leq(a, b, m) && lex_leq(b, c, m) && !lex_leq(a, c, m)) o.fail("not transitive");
    }
    for (; sets < 200; ++sets) {
        auto m = gen::random_ranks(rng, ar, gen::pick(rng, 1, 3));
        std::vector<Interpretation> xs;
        for (std::size_t k = gen::pick(rng, 1, 5); k > 0; --k) xs.push_back(any());
        auto g = meet(xs, m, ar, 2);
        for (const auto& x : xs) {
            if (!lex_leq(g, x, m)) o.fail("meet is not a lower bound");
        }
        for (const auto& lb : all) {
            const bool below = std::all_of(xs.begin(), xs.end(), [&](const auto& x) { return lex_leq(lb, x, m); });
            if (below && !lex_leq(lb, g, m)) o.fail("meet is not the greatest lower bound");
        }
    }
    if (o.ok) o.detail = std::to_string(triples) + " triples, " + std::to_string(sets) + " sets over 64 interpretations";
    return o;
}

Outcome dualization() {
    Outcome o;
    gen::Rng rng(13);
    gen::ProgramShape shape;
    shape.last_constrain = true;
    shape.free_slots_max = 0;
    shape.universe_max = 4;
    shape.cond_depth = 3;
    int layers = 0;
    for (; layers < 300; ++layers) {
        auto f = gen::random_program(rng, shape);
        const auto i = f.layers.size();
        auto below = f;
        below.layers.pop_back();
        auto direct = gfp_iterate(f.layers[i - 1], f, solve(below));
        auto rho = solve(f);
        for (const auto& rel : asserted_relations(f.layers[i - 1])) {
            if (rho.tuples(rel) != direct.tuples(rel)) o.fail("differs on " + rel + " in\n" + print_program(f));
        }
    }
    if (o.ok) o.detail = std::to_string(layers) + " constrain layers";
    return o;
}

Outcome dataflow() {
    Outcome o;
    Cfg chain;
    chain.nodes = {"n1", "n2", "n3", "n4"};
    chain.items = {"x", "y"};
    chain.edges = {{"n1", "n2"}, {"n2", "n3"}, {"n3", "n4"}};
    chain.entry = "n1";
    chain.exit = "n4";
    chain.kill = {{"n1", {"x"}}, {"n2", {"y"}}};
    chain.gen = {{"n2", {"x"}}, {"n3", {"y"}}};
    auto live = dataflow_solve(chain, Direction::Backward, Modality::May);
    using Set = std::set<std::string>;
    if (live["n3"] != Set{"y"} || live["n2"] != Set{"x"} || !live["n1"].empty()) o.fail("live variables on the chain");

    gen::Rng rng(17);
    int graphs = 0;
    for (; graphs < 150; ++graphs) {
        auto cfg = gen::random_cfg(rng, 20, 6);
        for (auto d : {Direction::Forward, Direction::Backward}) {
            for (auto m : {Modality::May, Modality::Must}) {
                if (dataflow_solve(cfg, d, m) != dataflow_oracle(cfg, d, m)) o.fail("differs from the worklist oracle");
            }
        }
    }
    if (o.ok) o.detail = "chain A(n3)={y} A(n2)={x} A(n1)={}; " + std::to_string(graphs) + " CFGs x 4 analyses";
    return o;
}

Outcome csp() {
    Outcome o;
    Csp sched;
    sched.variables = {"s1", "s2"};
    std::vector<std::string> d;
    for (int v = 0; v <= 8; ++v) d.push_back(std::to_string(v));
    sched.domains = {d, d};
    sched.constraints = {CspConstraint::range(0, 0, 4), CspConstraint::range(1, 0, 6), CspConstraint::difference(0, 1, 3, 4)};
    const CspSolution expected{{"0", "1", "2", "3"}, {"3", "4", "5", "6"}};
    if (ac3(sched) != expected) o.fail("AC-3 on the scheduling instance");
    if (csp_solve(sched, CspEncoding::Tables) != expected) o.fail("tables encoding on the scheduling instance");
    if (csp_solve(sched, CspEncoding::Functions) != expected) o.fail("functions encoding on the scheduling instance");

    gen::Rng rng(19);
    int instances = 0;
    for (; instances < 150; ++instances) {
        auto c = gen::random_csp(rng, 6, 8);
        auto ref = ac3(c);
        if (csp_solve(c, CspEncoding::Tables) != ref) o.fail("tables encoding differs from AC-3");
        if (csp_is_integer(c) && csp_solve(c, CspEncoding::Functions) != ref) o.fail("functions encoding differs from AC-3");
    }
    if (o.ok) o.detail = "D1'={0..3} D2'={3..6}; " + std::to_string(instances) + " random networks";
    return o;
}

Outcome ctl() {
    Outcome o;
    gen::Rng rng(23);
    int pairs = 0;
    for (; pairs < 200; ++pairs) {
        auto ts = gen::random_kripke(rng, 6);
        auto phi = gen::random_ctl(rng, 3);
        if (ctl_solve(phi, ts) != ctl_oracle(phi, ts)) o.fail("differs from the oracle on " + to_string(phi));
    }
    auto bakery_ts = bakery(3);
    auto mutex = parse_ctl("AG !(crit1 & crit2)");
    auto sat = ctl_solve(mutex, bakery_ts);
    if (!sat.contains(bakery_ts.initial[0])) o.fail("mutual exclusion fails at the Bakery initial state");
    if (sat != ctl_oracle(mutex, bakery_ts)) o.fail("Bakery result differs from the oracle");
    if (o.ok)
        o.detail = std::to_string(pairs) + " random pairs; Bakery (" + std::to_string(bakery_ts.states.size()) +
                   " states) satisfies AG !(crit1 & crit2)";
    return o;
}

LayeredFormula symmetric_closure(std::size_t n) {
    std::ostringstream src;
    src << "universe 0.." << n - 1 << "; rel E/2; rel T/2;\n";
    for (std::size_t k = 0; k + 1 < n; ++k) src << "fact E(" << k << ", " << k + 1 << ").\n";
    src << "define { forall x: forall y: E(x, y) | T(y, x) => T(x, y) }\n";
    return parse_program(src.str());
}

Outcome complexity() {
    Outcome o;
    std::ostringstream counts;
    for (std::size_t n : {4u, 8u, 16u, 32u, 64u}) {
        auto f = symmetric_closure(n);
        SolveStats st;
        auto rho = solve(f, &st);
        if (st.layers[0].nesting_depth != 2) o.fail("nesting depth is not 2");
        if (st.layers[0].ground_clauses != n * n) o.fail("ground count " + std::to_string(st.layers[0].ground_clauses) + " at |U|=" + std::to_string(n));
        if (rho.tuples("T").size() != 2 * (n - 1)) o.fail("wrong closure at |U|=" + std::to_string(n));
        counts << n << ":" << st.layers[0].ground_clauses << " ";
    }
    auto best = [](std::size_t n) {
        auto f = symmetric_closure(n);
        double min = 1e9;
        for (int rep = 0; rep < 7; ++rep) {
            const auto t0 = std::chrono::steady_clock::now();
            for (int k = 0; k < 10; ++k) solve(f);
            min = std::min(min, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        }
        return min;
    };
    const double t32 = best(32), t64 = best(64);
    const double ratio = t64 / t32;
    if (ratio > 8.0) o.fail("time ratio " + std::to_string(ratio));
    std::ostringstream msg;
    msg << "ground counts " << counts.str() << "; time ratio 64/32 = " << ratio;
    if (o.ok) o.detail = msg.str();
    else o.detail += "; " + msg.str();
    return o;
}

// The definition checked literally, one layer i at a time: what cl_i
// asserts or uses positively is not asserted in any later layer, and what
// it uses negatively is not asserted in cl_i or later.
struct Abstract {
    // per layer: kind, and per relation a bit mask 1=asserted 2=positive 4=negative
    std::vector<Clause::Kind> kinds;
    std::vector<std::vector<int>> use;
};

bool def2(const Abstract& p, std::size_t rel) {
    const auto s = p.kinds.size();
    auto asserted_from = [&](std::size_t from) {
        for (std::size_t j = from; j < s; ++j) {
            if (p.use[j][rel] & 1) return true;
        }
        return false;
    };
    for (std::size_t i = 0; i < s; ++i) {
        if ((p.use[i][rel] & 1) && asserted_from(i + 1)) return false;
        if ((p.use[i][rel] & 2) && asserted_from(i + 1)) return false;
        if ((p.use[i][rel] & 4) && asserted_from(i)) return false;
    }
    return true;
}

LayeredFormula concrete(const Abstract& p, std::size_t nrel) {
    static const char* const names[] = {"R", "S"};
    LayeredFormula f;
    f.universe = Universe::symbolic({"a"});
    for (std::size_t r = 0; r < nrel; ++r) f.relations[names[r]] = 1;
    const auto x = Term::var("x");
    for (std::size_t i = 0; i < p.kinds.size(); ++i) {
        Condition cond = Condition::truth();
        bool first = true;
        auto add = [&](Condition c) {
            cond = first ? std::move(c) : Condition::conj(std::move(cond), std::move(c));
            first = false;
        };
        for (std::size_t r = 0; r < nrel; ++r) {
            if (p.use[i][r] & 2) add(Condition::query(names[r], {x}));
            if (p.use[i][r] & 4) add(Condition::neg_query(names[r], {x}));
        }
        std::vector<Body> parts;
        for (std::size_t r = 0; r < nrel; ++r) {
            if (p.use[i][r] & 1) parts.push_back(Body::forall("x", Body::implies(cond, Assertion{names[r], {x}})));
        }
        f.layers.push_back(Clause{p.kinds[i], conj_all(std::move(parts))});
    }
    return f;
}

Outcome stratification() {
    Outcome o;
    auto eqneq = parse_program(R"(universe {a, b}; rel eq/2; rel neq/2;
        define { forall x: true => eq(x, x) }
        define { forall x: forall y: !eq(x, y) => neq(x, y) })");
    auto ranks = check_stratification(eqneq);
    if (ranks.rank("eq") != 1 || ranks.rank("neq") != 2) o.fail("eq/neq ranks");
    auto swapped = eqneq;
    std::swap(swapped.layers[0], swapped.layers[1]);
    try {
        check_stratification(swapped);
        o.fail("swapped eq/neq accepted");
    } catch (const StratificationError& e) {
        if (e.bullet() != 3 || e.relation() != "eq") o.fail(std::string("swapped eq/neq: ") + e.what());
    }

    std::size_t programs = 0, accepted = 0;
    for (std::size_t nrel = 1; nrel <= 2; ++nrel) {
        const int per_layer = 1 << (3 * nrel);
        for (std::size_t s = 1; s <= 2; ++s) {
            std::size_t total = 1;
            for (std::size_t i = 0; i < s; ++i) total *= 2 * static_cast<std::size_t>(per_layer);
            for (std::size_t code = 0; code < total; ++code) {
                Abstract p;
                std::size_t c = code;
                bool asserts_each = true;
                for (std::size_t i = 0; i < s; ++i) {
                    p.kinds.push_back(c % 2 ? Clause::Kind::Constrain : Clause::Kind::Define);
                    c /= 2;
                    int bits = static_cast<int>(c % per_layer);
                    c /= per_layer;
                    std::vector<int> use;
                    bool any = false;
                    for (std::size_t r = 0; r < nrel; ++r) {
                        use.push_back(bits & 7);
                        any = any || (bits & 1);
                        bits >>= 3;
                    }
                    asserts_each = asserts_each && any;
                    p.use.push_back(use);
                }
                if (!asserts_each) continue;  // a layer must assert something
                ++programs;
                bool expected = true;
                for (std::size_t r = 0; r < nrel; ++r) expected = expected && def2(p, r);
                auto f = concrete(p, nrel);
                try {
                    auto got = check_stratification(f);
                    if (!expected) o.fail("accepted a program violating the definition:\n" + print_program(f));
                    ++accepted;
                    for (std::size_t r = 0; r < nrel; ++r) {
                        std::size_t rank = 0;
                        for (std::size_t i = 0; i < s; ++i) {
                            if (p.use[i][r] & 1) rank = i + 1;
                        }
                        if (got.rank(r == 0 ? "R" : "S") != rank) o.fail("wrong rank in\n" + print_program(f));
                    }
                } catch (const StratificationError& e) {
                    if (expected) o.fail(std::string("rejected a stratified program: ") + e.what() + "\n" + print_program(f));
                }
            }
        }
    }
    if (o.ok)
        o.detail = "eq/neq ranks (1,2); swapped rejected by rule 3; " + std::to_string(programs) +
                   " abstract programs, " + std::to_string(accepted) + " stratified";
    return o;
}

}  // namespace

int main() {
    report(1, "least model", least_models);
    report(2, "moore family", moore_family);
    report(3, "order and meet laws", order_laws);
    report(4, "dualization", dualization);
    report(5, "dataflow", dataflow);
    report(6, "csp", csp);
    report(7, "ctl", ctl);
    report(8, "complexity shape", complexity);
    report(9, "stratification", stratification);
    return failures == 0 ? 0 : 1;
}
