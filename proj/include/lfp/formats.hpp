#pragma once

// Line-oriented input formats for the front ends. Every line is a keyword
// followed by whitespace-separated fields; `#` starts a comment.
//
// Control flow graphs:
//   node n1 n2 ...        item x y ...
//   entry n1              exit n4
//   edge n1 n2            iota x ...
//   kill n1 x ...         gen n2 x ...
//
// Constraint networks:
//   var s1 0..8           var c red green blue
//   con s1 s2 diff 3 4    (3 <= s2 - s1 <= 4)
//   con s1 range 0 4      (0 <= s1 <= 4)
//   con a b table red:green green:blue ...
//
// Transition systems:
//   state s1 s2 ...       init s1 ...
//   trans s1 s2           label p s1 s2 ...

#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lfp/frontends/csp.hpp"
#include "lfp/frontends/ctl.hpp"
#include "lfp/frontends/dataflow.hpp"
#include "lfp/text.hpp"

namespace lfp {

namespace detail {

struct Line {
    std::size_t number;
    std::vector<std::string> fields;
};

inline std::vector<Line> split_lines(std::string_view src) {
    std::vector<Line> out;
    std::istringstream in{std::string(src)};
    std::string raw;
    std::size_t n = 0;
    while (std::getline(in, raw)) {
        ++n;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ws(raw);
        Line line{n, {}};
        for (std::string w; ws >> w;) line.fields.push_back(w);
        if (!line.fields.empty()) out.push_back(std::move(line));
    }
    return out;
}

[[noreturn]] inline void bad_line(const Line& l, const std::string& what) { throw ParseError(l.number, 1, what); }

inline void need(const Line& l, std::size_t at_least, std::size_t at_most = static_cast<std::size_t>(-1)) {
    const auto args = l.fields.size() - 1;
    if (args < at_least || args > at_most) bad_line(l, "wrong number of fields for '" + l.fields[0] + "'");
}

inline long to_long(const Line& l, const std::string& s) {
    if (!is_int_literal(s)) bad_line(l, "expected an integer, found '" + s + "'");
    return std::stol(s);
}

}  // namespace detail

inline Cfg parse_cfg(std::string_view src) {
    Cfg cfg;
    for (const auto& l : detail::split_lines(src)) {
        const auto& k = l.fields[0];
        auto rest = [&] { return std::vector<std::string>(l.fields.begin() + 1, l.fields.end()); };
        if (k == "node") {
            for (auto& n : rest()) cfg.nodes.push_back(n);
        } else if (k == "item") {
            for (auto& x : rest()) cfg.items.push_back(x);
        } else if (k == "entry" || k == "exit") {
            detail::need(l, 1, 1);
            auto& slot = k == "entry" ? cfg.entry : cfg.exit;
            if (!slot.empty()) detail::bad_line(l, "duplicate '" + k + "'");
            slot = l.fields[1];
        } else if (k == "edge") {
            detail::need(l, 2, 2);
            cfg.edges.emplace_back(l.fields[1], l.fields[2]);
        } else if (k == "kill" || k == "gen") {
            detail::need(l, 1);
            auto& m = k == "kill" ? cfg.kill : cfg.gen;
            auto& xs = m[l.fields[1]];
            xs.insert(l.fields.begin() + 2, l.fields.end());
        } else if (k == "iota") {
            for (auto& x : rest()) cfg.iota.insert(x);
        } else {
            detail::bad_line(l, "unknown keyword '" + k + "'");
        }
    }
    validate(cfg);
    return cfg;
}

inline Csp parse_csp(std::string_view src) {
    Csp csp;
    std::map<std::string, std::size_t> index;
    auto var = [&](const detail::Line& l, const std::string& name) {
        auto it = index.find(name);
        if (it == index.end()) detail::bad_line(l, "unknown variable '" + name + "'");
        return it->second;
    };
    for (const auto& l : detail::split_lines(src)) {
        const auto& k = l.fields[0];
        if (k == "var") {
            detail::need(l, 1);
            const auto& name = l.fields[1];
            if (index.contains(name)) detail::bad_line(l, "duplicate variable '" + name + "'");
            std::vector<std::string> dom;
            if (l.fields.size() == 3 && l.fields[2].find("..") != std::string::npos) {
                const auto& r = l.fields[2];
                const auto dots = r.find("..");
                const long lo = detail::to_long(l, r.substr(0, dots));
                const long hi = detail::to_long(l, r.substr(dots + 2));
                if (hi - lo > 100000) detail::bad_line(l, "domain too large");
                for (long v = lo; v <= hi; ++v) dom.push_back(std::to_string(v));
            } else {
                dom.assign(l.fields.begin() + 2, l.fields.end());
            }
            index[name] = csp.variables.size();
            csp.variables.push_back(name);
            csp.domains.push_back(std::move(dom));
        } else if (k == "con") {
            detail::need(l, 3);
            const auto i = var(l, l.fields[1]);
            if (l.fields[2] == "range") {
                detail::need(l, 4, 4);
                csp.constraints.push_back(
                    CspConstraint::range(i, detail::to_long(l, l.fields[3]), detail::to_long(l, l.fields[4])));
                continue;
            }
            const auto j = var(l, l.fields[2]);
            if (l.fields.size() < 4) detail::bad_line(l, "missing constraint kind");
            const auto& kind = l.fields[3];
            if (kind == "diff") {
                detail::need(l, 5, 5);
                csp.constraints.push_back(
                    CspConstraint::difference(i, j, detail::to_long(l, l.fields[4]), detail::to_long(l, l.fields[5])));
            } else if (kind == "table") {
                std::set<std::pair<std::string, std::string>> ts;
                for (std::size_t f = 4; f < l.fields.size(); ++f) {
                    const auto& p = l.fields[f];
                    const auto colon = p.find(':');
                    if (colon == std::string::npos || p.find(':', colon + 1) != std::string::npos)
                        detail::bad_line(l, "table entries are binary pairs 'a:b', found '" + p + "'");
                    ts.emplace(p.substr(0, colon), p.substr(colon + 1));
                }
                csp.constraints.push_back(CspConstraint::table(i, j, std::move(ts)));
            } else {
                detail::bad_line(l, "unknown constraint kind '" + kind + "'");
            }
        } else {
            detail::bad_line(l, "unknown keyword '" + k + "'");
        }
    }
    validate(csp);
    return csp;
}

inline Kripke parse_kripke(std::string_view src) {
    Kripke ts;
    std::map<std::string, std::size_t> index;
    auto state = [&](const detail::Line& l, const std::string& name) {
        auto it = index.find(name);
        if (it == index.end()) detail::bad_line(l, "unknown state '" + name + "'");
        return it->second;
    };
    for (const auto& l : detail::split_lines(src)) {
        const auto& k = l.fields[0];
        if (k == "state") {
            for (std::size_t f = 1; f < l.fields.size(); ++f) {
                if (index.contains(l.fields[f])) detail::bad_line(l, "duplicate state '" + l.fields[f] + "'");
                index[l.fields[f]] = ts.states.size();
                ts.states.push_back(l.fields[f]);
            }
        } else if (k == "init") {
            for (std::size_t f = 1; f < l.fields.size(); ++f) ts.initial.push_back(state(l, l.fields[f]));
        } else if (k == "trans") {
            detail::need(l, 2, 2);
            ts.transitions.emplace(state(l, l.fields[1]), state(l, l.fields[2]));
        } else if (k == "label") {
            detail::need(l, 1);
            auto& ss = ts.labels[l.fields[1]];
            for (std::size_t f = 2; f < l.fields.size(); ++f) ss.insert(state(l, l.fields[f]));
        } else {
            detail::bad_line(l, "unknown keyword '" + k + "'");
        }
    }
    validate(ts);
    return ts;
}

inline std::string print_kripke(const Kripke& ts) {
    std::ostringstream os;
    os << "state";
    for (const auto& s : ts.states) os << ' ' << s;
    os << '\n';
    if (!ts.initial.empty()) {
        os << "init";
        for (auto s : ts.initial) os << ' ' << ts.states[s];
        os << '\n';
    }
    for (const auto& [s, t] : ts.transitions) os << "trans " << ts.states[s] << ' ' << ts.states[t] << '\n';
    for (const auto& [p, ss] : ts.labels) {
        os << "label " << p;
        for (auto s : ss) os << ' ' << ts.states[s];
        os << '\n';
    }
    return os.str();
}

}  // namespace lfp
