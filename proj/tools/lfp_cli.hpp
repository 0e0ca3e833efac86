#pragma once

// Command line front end. `run` does all the work so that tests can drive
// it with string streams.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lfp/engine.hpp"
#include "lfp/formats.hpp"
#include "lfp/semantics.hpp"
#include "lfp/stratify.hpp"
#include "lfp/text.hpp"

namespace lfp::cli {

enum Exit : int { kOk = 0, kInputError = 1, kNotStratified = 2, kUnsat = 3, kMismatch = 4 };

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace detail {

inline void print_ranks(std::ostream& out, const RankMap& ranks) {
    for (const auto& [rel, info] : ranks.ranks) out << rel << '\t' << info.rank << '\t' << to_string(info.kind) << '\n';
}

inline void print_stats(std::ostream& out, const SolveStats& stats) {
    for (const auto& l : stats.layers) {
        out << "# layer " << l.layer << ' ' << (l.kind == Clause::Kind::Define ? "define" : "constrain")
            << " k=" << l.nesting_depth << " ground=" << l.ground_clauses << " simple=" << l.simple_clauses
            << " fresh=" << l.fresh_symbols << '\n';
    }
}

inline void print_dataflow(std::ostream& out, const Cfg& cfg, const DataflowSolution& sol) {
    for (const auto& n : cfg.nodes) {
        for (const auto& x : cfg.items) {
            if (sol.at(n).contains(x)) out << "A\t" << n << '\t' << x << '\n';
        }
    }
}

inline void print_csp(std::ostream& out, const Csp& csp, const CspSolution& sol) {
    for (std::size_t v = 0; v < csp.variables.size(); ++v) {
        for (const auto& x : sol[v]) out << csp.variables[v] << '\t' << x << '\n';
    }
}

inline void print_states(std::ostream& out, const Kripke& ts, const std::set<std::size_t>& sat) {
    for (auto s : sat) out << ts.states[s] << '\n';
    for (auto s : ts.initial) out << "# initial " << ts.states[s] << (sat.contains(s) ? " holds" : " fails") << '\n';
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Layered fixed point solver"};
    app.require_subcommand(1);

    std::string file, model_file, formula, direction = "fwd", modality = "may", encoding = "tables";
    bool stats = false, oracle = false, emit = false;
    int bound = 3;

    auto* check = app.add_subcommand("check", "Check stratification and print the rank of every relation");
    check->add_option("file", file, "Program file")->required();

    auto* solve_cmd = app.add_subcommand("solve", "Print the least model of a program");
    solve_cmd->add_option("file", file, "Program file")->required();
    solve_cmd->add_flag("--stats", stats, "Append per-layer grounding statistics as # comments");

    auto* oracle_cmd = app.add_subcommand("oracle", "Check a model against a program by direct evaluation");
    oracle_cmd->add_option("file", file, "Program file")->required();
    oracle_cmd->add_option("--model", model_file, "Model file in the format printed by solve")->required();

    auto* df = app.add_subcommand("dataflow", "Solve a bit-vector dataflow analysis");
    df->add_option("file", file, "CFG file")->required();
    df->add_option("--direction", direction, "fwd or bwd")->check(CLI::IsMember({"fwd", "bwd"}));
    df->add_option("--modality", modality, "may or must")->check(CLI::IsMember({"may", "must"}));

    auto* csp_cmd = app.add_subcommand("csp", "Reduce a binary constraint network to arc consistency");
    csp_cmd->add_option("file", file, "CSP file")->required();
    csp_cmd->add_option("--encoding", encoding, "tables or functions")->check(CLI::IsMember({"tables", "functions"}));

    auto* ctl_cmd = app.add_subcommand("ctl", "Print the states satisfying a CTL formula");
    ctl_cmd->add_option("file", file, "Transition system file")->required();
    ctl_cmd->add_option("--formula", formula, "CTL formula")->required();

    for (auto* sub : {df, csp_cmd, ctl_cmd}) {
        sub->add_flag("--oracle", oracle, "Also run the reference algorithm and fail on any difference");
        sub->add_flag("--emit", emit, "Print the generated program instead of solving it");
    }

    auto* bakery_cmd = app.add_subcommand("bakery", "Print the bounded two-process Bakery transition system");
    bakery_cmd->add_option("--bound", bound, "Ticket bound (at least 2)");

    std::vector<const char*> argv{"lfp"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*check) {
            auto f = parse_program(read_file(file));
            detail::print_ranks(out, check_stratification(f));
            return kOk;
        }
        if (*solve_cmd) {
            auto f = parse_program(read_file(file));
            SolveStats st;
            auto rho = solve(f, stats ? &st : nullptr);
            out << print_model(rho, f.universe);
            if (stats) detail::print_stats(out, st);
            return kOk;
        }
        if (*oracle_cmd) {
            auto f = parse_program(read_file(file));
            auto rho = parse_model(read_file(model_file), f);
            check_stratification(f);
            const bool facts = covers_facts(rho, f);
            out << "facts\t" << (facts ? "ok" : "missing") << '\n';
            auto layers = sat_layers(rho, f);
            bool ok = facts;
            for (std::size_t i = 0; i < layers.size(); ++i) {
                out << "layer " << i + 1 << '\t' << (layers[i] ? "sat" : "unsat") << '\n';
                ok = ok && layers[i];
            }
            return ok ? kOk : kUnsat;
        }
        if (*df) {
            auto cfg = parse_cfg(read_file(file));
            const auto dir = direction == "fwd" ? Direction::Forward : Direction::Backward;
            const auto mod = modality == "may" ? Modality::May : Modality::Must;
            auto f = dataflow_formula(cfg, dir, mod);
            if (emit) {
                out << print_program(f);
                return kOk;
            }
            auto sol = dataflow_extract(cfg, f, solve(f));
            detail::print_dataflow(out, cfg, sol);
            if (oracle) {
                auto ref = dataflow_oracle(cfg, dir, mod);
                if (ref != sol) {
                    err << "mismatch: the worklist solver gives\n";
                    detail::print_dataflow(err, cfg, ref);
                    return kMismatch;
                }
            }
            return kOk;
        }
        if (*csp_cmd) {
            auto csp = parse_csp(read_file(file));
            const auto enc = encoding == "tables" ? CspEncoding::Tables : CspEncoding::Functions;
            auto f = csp_formula(csp, enc);
            if (emit) {
                out << print_program(f);
                return kOk;
            }
            auto sol = csp_extract(csp, f, solve(f));
            detail::print_csp(out, csp, sol);
            if (oracle) {
                auto ref = ac3(csp);
                if (ref != sol) {
                    err << "mismatch: AC-3 gives\n";
                    detail::print_csp(err, csp, ref);
                    return kMismatch;
                }
            }
            return kOk;
        }
        if (*ctl_cmd) {
            auto ts = parse_kripke(read_file(file));
            auto phi = parse_ctl(formula);
            auto prog = ctl_compile(phi, ts);
            if (emit) {
                out << print_program(prog.formula);
                return kOk;
            }
            auto rho = solve(prog.formula);
            std::set<std::size_t> sat;
            for (const auto& t : rho.tuples(prog.relation)) sat.insert(t[0]);
            detail::print_states(out, ts, sat);
            if (oracle) {
                auto ref = ctl_oracle(phi, ts);
                if (ref != sat) {
                    err << "mismatch: explicit-state checking gives\n";
                    detail::print_states(err, ts, ref);
                    return kMismatch;
                }
            }
            return kOk;
        }
        if (*bakery_cmd) {
            out << print_kripke(bakery(bound));
            return kOk;
        }
    } catch (const StratificationError& e) {
        err << e.what() << '\n';
        return kNotStratified;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}

}  // namespace lfp::cli
