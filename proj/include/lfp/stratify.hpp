#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lfp/model.hpp"

namespace lfp {

struct LayerUsage {
    std::set<std::string> asserted;
    std::set<std::string> positive;
    std::set<std::string> negative;

    bool operator==(const LayerUsage&) const = default;
};

/// Per-layer syntactic usage, index 0 is layer 1.
using UsageReport = std::vector<LayerUsage>;

enum class RelationKind { Fact, Defined, Constrained };

inline const char* to_string(RelationKind k) {
    switch (k) {
    case RelationKind::Fact: return "fact";
    case RelationKind::Defined: return "defined";
    case RelationKind::Constrained: return "constrained";
    }
    return "?";
}

struct RankInfo {
    std::size_t rank = 0;
    RelationKind kind = RelationKind::Fact;

    bool operator==(const RankInfo&) const = default;
};

/// Rank and kind of every relation, plus the order (number of layers).
struct RankMap {
    std::size_t order = 0;
    std::map<std::string, RankInfo> ranks;

    const RankInfo& at(const std::string& rel) const {
        auto it = ranks.find(rel);
        if (it == ranks.end()) throw SignatureError("relation '" + rel + "' has no rank");
        return it->second;
    }
    std::size_t rank(const std::string& rel) const { return at(rel).rank; }

    bool operator==(const RankMap&) const = default;
};

class StratificationError : public Error {
public:
    /// `bullet` is 1 (re-assertion in a later layer), 2 (positive use before
    /// the relation is complete) or 3 (negative use at or after assertion).
    /// Layers are 1-based: `use_layer` is where the offending occurrence is,
    /// `assert_layer` the later layer asserting the relation.
    StratificationError(int bullet, std::string relation, std::size_t use_layer, std::size_t assert_layer,
                        bool mixed_kinds = false)
        : Error(describe(bullet, relation, use_layer, assert_layer, mixed_kinds)),
          bullet_(bullet),
          relation_(std::move(relation)),
          use_layer_(use_layer),
          assert_layer_(assert_layer) {}

    int bullet() const { return bullet_; }
    const std::string& relation() const { return relation_; }
    std::size_t use_layer() const { return use_layer_; }
    std::size_t assert_layer() const { return assert_layer_; }

private:
    static std::string describe(int bullet, const std::string& rel, std::size_t i, std::size_t j, bool mixed) {
        std::string where = "relation '" + rel + "' ";
        std::string msg = "not stratified (rule " + std::to_string(bullet) + "): ";
        switch (bullet) {
        case 1:
            if (mixed)
                return msg + where + "is defined and constrained (layers " + std::to_string(i) + " and " +
                       std::to_string(j) + "); a relation is either inductive or co-inductive";
            return msg + where + "asserted in layer " + std::to_string(i) + " is asserted again in layer " +
                   std::to_string(j);
        case 2:
            return msg + where + "is used positively in layer " + std::to_string(i) + " but asserted in later layer " +
                   std::to_string(j);
        default:
            return msg + where + "is used negatively in layer " + std::to_string(i) + " but asserted in layer " +
                   std::to_string(j);
        }
    }

    int bullet_;
    std::string relation_;
    std::size_t use_layer_;
    std::size_t assert_layer_;
};

namespace detail {

inline void scan_cond(const Condition& c, LayerUsage& u) {
    using K = Condition::Kind;
    switch (c.kind) {
    case K::Query: u.positive.insert(c.name); break;
    case K::NegQuery: u.negative.insert(c.name); break;
    case K::And:
    case K::Or:
        scan_cond(c.children[0], u);
        scan_cond(c.children[1], u);
        break;
    case K::Exists:
    case K::Forall: scan_cond(c.children[0], u); break;
    case K::True:
    case K::False: break;
    }
}

inline void scan_body(const Body& b, LayerUsage& u) {
    switch (b.kind) {
    case Body::Kind::Implies:
        u.asserted.insert(b.head.relation);
        scan_cond(b.cond, u);
        break;
    case Body::Kind::Forall: scan_body(b.children[0], u); break;
    case Body::Kind::And:
        scan_body(b.children[0], u);
        scan_body(b.children[1], u);
        break;
    }
}

}  // namespace detail

inline LayerUsage usage(const Clause& cl) {
    LayerUsage u;
    detail::scan_body(cl.body, u);
    return u;
}

inline UsageReport usage(const LayeredFormula& f) {
    UsageReport r;
    r.reserve(f.layers.size());
    for (const auto& cl : f.layers) r.push_back(usage(cl));
    return r;
}

/// Checks the three stratification rules and computes ranks. Throws
/// StratificationError for the first violation found, scanning layers in
/// order and rules 1, 2, 3 within a layer.
inline RankMap check_stratification(const LayeredFormula& f) {
    const auto report = usage(f);
    const std::size_t s = report.size();

    for (std::size_t i = 0; i < s; ++i) {
        const auto& ui = report[i];
        for (std::size_t j = i + 1; j < s; ++j) {
            for (const auto& r : ui.asserted) {
                if (report[j].asserted.contains(r))
                    throw StratificationError(1, r, i + 1, j + 1, f.layers[i].kind != f.layers[j].kind);
            }
        }
        for (std::size_t j = i + 1; j < s; ++j) {
            for (const auto& r : ui.positive) {
                if (report[j].asserted.contains(r)) throw StratificationError(2, r, i + 1, j + 1);
            }
        }
        for (std::size_t j = i; j < s; ++j) {
            for (const auto& r : ui.negative) {
                if (report[j].asserted.contains(r)) throw StratificationError(3, r, i + 1, j + 1);
            }
        }
    }

    RankMap out;
    out.order = s;
    for (const auto& [rel, _] : f.relations) out.ranks[rel] = RankInfo{0, RelationKind::Fact};
    for (std::size_t i = 0; i < s; ++i) {
        const auto kind = f.layers[i].kind == Clause::Kind::Define ? RelationKind::Defined : RelationKind::Constrained;
        for (const auto& r : report[i].asserted) out.ranks[r] = RankInfo{i + 1, kind};
    }
    return out;
}

}  // namespace lfp
