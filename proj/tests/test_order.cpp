#include <gtest/gtest.h>

#include <vector>

#include "lfp/order.hpp"
#include "lfp/semantics.hpp"
#include "lfp/text.hpp"
#include "support/generators.hpp"

using namespace lfp;

namespace {

RankMap single(RelationKind kind) {
    RankMap m;
    m.order = 1;
    m.ranks["R"] = RankInfo{1, kind};
    return m;
}

Interpretation r_of(std::initializer_list<Tuple> ts) {
    Interpretation rho;
    rho.declare("R");
    for (const auto& t : ts) rho.insert("R", t);
    return rho;
}

}  // namespace

TEST(LexLeq, Reflexive) {
    auto m = single(RelationKind::Defined);
    EXPECT_TRUE(lex_leq(r_of({{0}}), r_of({{0}}), m));
    EXPECT_TRUE(lex_leq(r_of({}), r_of({}), m));
}

TEST(LexLeq, DefinedRelationsGrow) {
    auto m = single(RelationKind::Defined);
    EXPECT_TRUE(lex_leq(r_of({}), r_of({{0}}), m));
    EXPECT_FALSE(lex_leq(r_of({{0}}), r_of({}), m));
}

TEST(LexLeq, ConstrainedRelationsShrink) {
    auto m = single(RelationKind::Constrained);
    EXPECT_TRUE(lex_leq(r_of({{0}}), r_of({}), m));
    EXPECT_FALSE(lex_leq(r_of({}), r_of({{0}}), m));
}

TEST(LexLeq, LowerRankDecidesFirst) {
    RankMap m;
    m.order = 2;
    m.ranks["A"] = RankInfo{1, RelationKind::Defined};
    m.ranks["B"] = RankInfo{2, RelationKind::Defined};
    Interpretation small, big;
    small.insert("B", {0});
    big.insert("A", {0});
    EXPECT_TRUE(lex_leq(small, big, m));   // A grows, B may do anything
    EXPECT_FALSE(lex_leq(big, small, m));
}

TEST(LexLeq, RejectsForeignRelations) {
    auto m = single(RelationKind::Defined);
    Interpretation rho;
    rho.insert("Z", {0});
    EXPECT_THROW(lex_leq(rho, rho, m), SignatureError);
}

TEST(LayerLeq, Examples) {
    RankMap m;
    m.order = 2;
    m.ranks["A"] = RankInfo{1, RelationKind::Defined};
    m.ranks["B"] = RankInfo{2, RelationKind::Constrained};
    Interpretation a, b;
    a.insert("A", {0});
    b = a;
    EXPECT_TRUE(layer_leq(a, b, 1, m));
    EXPECT_TRUE(layer_leq(a, b, 2, m));
    b.insert("B", {1});
    EXPECT_TRUE(layer_leq(a, b, 2, m));
    EXPECT_FALSE(layer_leq(b, a, 2, m));
    Interpretation c;  // differs at rank 1
    c.insert("B", {1});
    EXPECT_FALSE(layer_leq(c, b, 2, m));
}

TEST(Meet, Singleton) {
    auto m = single(RelationKind::Constrained);
    std::vector<Interpretation> ms{r_of({{0}})};
    EXPECT_EQ(meet(ms, m, {{"R", 1}}, 2), r_of({{0}}));
}

TEST(Meet, DefineLayerIsIntersection) {
    auto m = single(RelationKind::Defined);
    std::vector<Interpretation> ms{r_of({{0}, {1}}), r_of({{1}, {2}})};
    EXPECT_EQ(meet(ms, m, {{"R", 1}}, 3), r_of({{1}}));
}

TEST(Meet, ConstrainLayerIsUnion) {
    auto m = single(RelationKind::Constrained);
    std::vector<Interpretation> ms{r_of({{0}}), r_of({{2}})};
    EXPECT_EQ(meet(ms, m, {{"R", 1}}, 3), r_of({{0}, {2}}));
}

TEST(Meet, EmptySetRejected) {
    auto m = single(RelationKind::Defined);
    std::vector<Interpretation> none;
    EXPECT_THROW(meet(none, m, {{"R", 1}}, 1), Error);
}

// Models of define(A) then constrain(B) on {a}; the meet is computed by the
// rank recursion and must be below each model and above every common lower
// bound among all interpretations.
TEST(Meet, MixedThreeModelInstance) {
    RankMap m;
    m.order = 2;
    m.ranks["A"] = RankInfo{1, RelationKind::Defined};
    m.ranks["B"] = RankInfo{2, RelationKind::Constrained};
    const std::map<std::string, std::size_t> ar{{"A", 1}, {"B", 1}};
    Interpretation m1, m2, m3;
    m1.insert("A", {0});
    m2.insert("A", {0});
    m2.insert("B", {0});
    m3.declare("A");  // A empty, B empty
    std::vector<Interpretation> ms{m1, m2, m3};
    auto g = meet(ms, m, ar, 1);
    Interpretation expected;  // rank 1 intersection is empty, only m3 survives
    EXPECT_EQ(g, expected);
    for (const auto& x : ms) EXPECT_TRUE(lex_leq(g, x, m));
    for (const auto& lb : gen::all_interpretations(ar, 1)) {
        bool below_all = true;
        for (const auto& x : ms) below_all = below_all && lex_leq(lb, x, m);
        if (below_all) {
            EXPECT_TRUE(lex_leq(lb, g, m));
        }
    }
}

TEST(OrderLaws, PartialOrderOnSmallSignatures) {
    gen::Rng rng(3);
    const std::map<std::string, std::size_t> ar{{"A", 1}, {"B", 1}, {"C", 0}};
    const auto all = gen::all_interpretations(ar, 2);
    for (int round = 0; round < 8; ++round) {
        auto m = gen::random_ranks(rng, ar, gen::pick(rng, 1, 3));
        for (const auto& a : all) {
            ASSERT_TRUE(lex_leq(a, a, m));
            for (const auto& b : all) {
                const bool ab = lex_leq(a, b, m);
                if (ab && lex_leq(b, a, m)) {
                    ASSERT_EQ(a, b);
                }
                if (!ab) continue;
                for (const auto& c : all) {
                    if (lex_leq(b, c, m)) {
                        ASSERT_TRUE(lex_leq(a, c, m));
                    }
                }
            }
        }
    }
}

TEST(OrderLaws, MeetIsGreatestLowerBound) {
    gen::Rng rng(5);
    const std::map<std::string, std::size_t> ar{{"A", 1}, {"B", 1}, {"C", 1}};
    const auto all = gen::all_interpretations(ar, 2);
    for (int round = 0; round < 60; ++round) {
        auto m = gen::random_ranks(rng, ar, gen::pick(rng, 1, 3));
        std::vector<Interpretation> ms;
        const auto k = gen::pick(rng, 1, 4);
        for (std::size_t i = 0; i < k; ++i) ms.push_back(all[gen::pick(rng, 0, all.size() - 1)]);
        auto g = meet(ms, m, ar, 2);
        for (const auto& x : ms) ASSERT_TRUE(lex_leq(g, x, m));
        for (const auto& lb : all) {
            bool below_all = true;
            for (const auto& x : ms) below_all = below_all && lex_leq(lb, x, m);
            if (below_all) {
                ASSERT_TRUE(lex_leq(lb, g, m));
            }
        }
    }
}
