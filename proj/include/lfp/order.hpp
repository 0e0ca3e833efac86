#pragma once

// The lexicographic order on interpretations induced by the layering, the
// per-layer inclusion order and greatest lower bounds.

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "lfp/model.hpp"
#include "lfp/stratify.hpp"

namespace lfp {

namespace detail {

inline void check_covered(const Interpretation& rho, const RankMap& ranks) {
    for (const auto& [rel, _] : rho.relations()) {
        if (!ranks.ranks.contains(rel))
            throw SignatureError("interpretation mentions relation '" + rel + "' outside the signature");
    }
}

inline bool subset(const TupleSet& a, const TupleSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace detail

/// rho1 is below rho2: for some rank j, lower ranks agree, rank-j defined
/// (or fact) relations grow, rank-j constrained relations shrink, and j is
/// either the last layer or some rank-j relation differs.
inline bool lex_leq(const Interpretation& rho1, const Interpretation& rho2, const RankMap& ranks) {
    detail::check_covered(rho1, ranks);
    detail::check_covered(rho2, ranks);
    for (std::size_t j = 0; j <= ranks.order; ++j) {
        bool differs = false;
        bool ok = true;
        for (const auto& [rel, info] : ranks.ranks) {
            if (info.rank != j) continue;
            const auto& a = rho1.tuples(rel);
            const auto& b = rho2.tuples(rel);
            if (a != b) differs = true;
            if (j == 0 || info.kind != RelationKind::Constrained) ok = ok && detail::subset(a, b);
            else ok = ok && detail::subset(b, a);
        }
        if (ok && (differs || j == ranks.order)) return true;
        if (differs) return false;  // (a) fails for every larger j
    }
    return false;
}

/// Equality below rank j and inclusion at rank j.
inline bool layer_leq(const Interpretation& rho1, const Interpretation& rho2, std::size_t j, const RankMap& ranks) {
    detail::check_covered(rho1, ranks);
    detail::check_covered(rho2, ranks);
    for (const auto& [rel, info] : ranks.ranks) {
        const auto& a = rho1.tuples(rel);
        const auto& b = rho2.tuples(rel);
        if (info.rank < j && a != b) return false;
        if (info.rank == j && !detail::subset(a, b)) return false;
    }
    return true;
}

/// Greatest lower bound of a non-empty set of interpretations, built rank by
/// rank over the models that agree with the result on all lower ranks.
/// Relations are interpreted over a universe of `universe_size` atoms with
/// the arities in `arities`; an empty intersection over no models is the set
/// of all tuples.
inline Interpretation meet(std::span<const Interpretation> models, const RankMap& ranks,
                           const std::map<std::string, std::size_t>& arities, std::size_t universe_size) {
    if (models.empty()) throw Error("meet of an empty set of interpretations is not supported");
    for (const auto& m : models) detail::check_covered(m, ranks);

    std::vector<const Interpretation*> current;
    for (const auto& m : models) current.push_back(&m);

    Interpretation out;
    for (std::size_t j = 0; j <= ranks.order; ++j) {
        std::vector<std::string> at_rank;
        for (const auto& [rel, info] : ranks.ranks) {
            if (info.rank != j) continue;
            at_rank.push_back(rel);
            const bool intersect = j == 0 || info.kind != RelationKind::Constrained;
            TupleSet acc;
            if (intersect) {
                auto it = arities.find(rel);
                if (it == arities.end()) throw SignatureError("unknown relation '" + rel + "'");
                acc = current.empty() ? all_tuples(universe_size, it->second) : current.front()->tuples(rel);
                for (const auto* m : current) {
                    TupleSet next;
                    const auto& ts = m->tuples(rel);
                    std::set_intersection(acc.begin(), acc.end(), ts.begin(), ts.end(), std::inserter(next, next.end()));
                    acc = std::move(next);
                }
            } else {
                for (const auto* m : current) {
                    const auto& ts = m->tuples(rel);
                    acc.insert(ts.begin(), ts.end());
                }
            }
            out.assign(rel, std::move(acc));
        }
        std::erase_if(current, [&](const Interpretation* m) {
            return std::any_of(at_rank.begin(), at_rank.end(),
                               [&](const std::string& rel) { return m->tuples(rel) != out.tuples(rel); });
        });
    }
    return out;
}

inline Interpretation meet(std::span<const Interpretation> models, const RankMap& ranks, const LayeredFormula& f) {
    return meet(models, ranks, f.relations, f.universe.size());
}

}  // namespace lfp
