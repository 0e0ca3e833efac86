#include <gtest/gtest.h>

#include "lfp/stratify.hpp"
#include "lfp/text.hpp"

using namespace lfp;

namespace {

const char* const kEqNeq = R"(
universe {a, b};
rel eq/2; rel neq/2;
define { forall x: true => eq(x, x) }
define { forall x: forall y: !eq(x, y) => neq(x, y) }
)";

const char* const kSwapped = R"(
universe {a, b};
rel eq/2; rel neq/2;
define { forall x: forall y: !eq(x, y) => neq(x, y) }
define { forall x: true => eq(x, x) }
)";

}  // namespace

TEST(Usage, DefineWithoutQueries) {
    auto f = parse_program("universe {a}; rel eq/2; define { forall x: true => eq(x, x) }");
    auto u = usage(f.layers[0]);
    EXPECT_EQ(u.asserted, std::set<std::string>{"eq"});
    EXPECT_TRUE(u.positive.empty());
    EXPECT_TRUE(u.negative.empty());
}

TEST(Usage, ConstrainAssertsLeftSide) {
    auto f = parse_program("universe {a}; rel G/1; rel P/1; constrain { forall x: G(x) => P(x) }");
    auto u = usage(f.layers[0]);
    EXPECT_EQ(u.asserted, std::set<std::string>{"G"});
    EXPECT_EQ(u.positive, std::set<std::string>{"P"});
}

TEST(Usage, NegativeQuery) {
    auto f = parse_program(kEqNeq);
    auto u = usage(f.layers[1]);
    EXPECT_EQ(u.asserted, std::set<std::string>{"neq"});
    EXPECT_EQ(u.negative, std::set<std::string>{"eq"});
    EXPECT_TRUE(u.positive.empty());
}

TEST(Stratification, EqNeqRanks) {
    auto ranks = check_stratification(parse_program(kEqNeq));
    EXPECT_EQ(ranks.order, 2u);
    EXPECT_EQ(ranks.rank("eq"), 1u);
    EXPECT_EQ(ranks.rank("neq"), 2u);
    EXPECT_EQ(ranks.at("eq").kind, RelationKind::Defined);
}

TEST(Stratification, SwappedLayersViolateRuleThree) {
    auto f = parse_program(kSwapped);
    try {
        check_stratification(f);
        FAIL() << "accepted";
    } catch (const StratificationError& e) {
        EXPECT_EQ(e.bullet(), 3);
        EXPECT_EQ(e.relation(), "eq");
        EXPECT_EQ(e.use_layer(), 1u);
        EXPECT_EQ(e.assert_layer(), 2u);
        EXPECT_NE(std::string(e.what()).find("'eq'"), std::string::npos);
    }
}

TEST(Stratification, PositiveSelfRecursionIsLegal) {
    auto ranks = check_stratification(parse_program("universe {a}; rel R/1; define { forall x: R(x) => R(x) }"));
    EXPECT_EQ(ranks.rank("R"), 1u);
}

TEST(Stratification, NegativeSelfUseIsRuleThree) {
    auto f = parse_program("universe {a}; rel R/1; define { forall x: !R(x) => R(x) }");
    try {
        check_stratification(f);
        FAIL();
    } catch (const StratificationError& e) {
        EXPECT_EQ(e.bullet(), 3);
        EXPECT_EQ(e.use_layer(), 1u);
        EXPECT_EQ(e.assert_layer(), 1u);
    }
}

TEST(Stratification, ReassertionIsRuleOne) {
    auto f = parse_program(R"(universe {a}; rel R/1;
        define { forall x: true => R(x) }
        define { forall x: true => R(x) })");
    try {
        check_stratification(f);
        FAIL();
    } catch (const StratificationError& e) {
        EXPECT_EQ(e.bullet(), 1);
    }
}

TEST(Stratification, DefinedAndConstrainedGetsDedicatedMessage) {
    auto f = parse_program(R"(universe {a}; rel R/1;
        define { forall x: true => R(x) }
        constrain { forall x: R(x) => true })");
    try {
        check_stratification(f);
        FAIL();
    } catch (const StratificationError& e) {
        EXPECT_EQ(e.bullet(), 1);
        EXPECT_NE(std::string(e.what()).find("defined and constrained"), std::string::npos);
    }
}

TEST(Stratification, PositiveUseBeforeAssertionIsRuleTwo) {
    auto f = parse_program(R"(universe {a}; rel R/1; rel S/1;
        define { forall x: R(x) => S(x) }
        define { forall x: true => R(x) })");
    try {
        check_stratification(f);
        FAIL();
    } catch (const StratificationError& e) {
        EXPECT_EQ(e.bullet(), 2);
        EXPECT_EQ(e.relation(), "R");
    }
}

TEST(Stratification, FactsHaveRankZero) {
    auto ranks = check_stratification(parse_program(R"(universe {a}; rel E/1; rel R/1;
        fact E(a).
        define { forall x: !E(x) => R(x) })"));
    EXPECT_EQ(ranks.rank("E"), 0u);
    EXPECT_EQ(ranks.at("E").kind, RelationKind::Fact);
    EXPECT_EQ(ranks.at("R").kind, RelationKind::Defined);
}

TEST(Stratification, RanksStableUnderReparse) {
    auto f = parse_program(kEqNeq);
    auto g = parse_program(print_program(f));
    EXPECT_EQ(check_stratification(f), check_stratification(g));
}
