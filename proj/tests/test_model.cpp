#include <gtest/gtest.h>

#include "lfp/model.hpp"
#include "lfp/text.hpp"

using namespace lfp;

TEST(Universe, SymbolicAtomsKeepDeclarationOrder) {
    auto u = Universe::symbolic({"b", "a", "c"});
    EXPECT_EQ(u.size(), 3u);
    EXPECT_EQ(u.name(0), "b");
    EXPECT_EQ(*u.find("c"), 2u);
    EXPECT_FALSE(u.find("d"));
    EXPECT_FALSE(u.is_integer());
}

TEST(Universe, RejectsEmptyAndDuplicates) {
    EXPECT_THROW(Universe::symbolic({}), SignatureError);
    EXPECT_THROW(Universe::symbolic({"a", "a"}), SignatureError);
    EXPECT_THROW(Universe::range(3, 2), SignatureError);
}

TEST(Universe, IntegerRange) {
    auto u = Universe::range(-2, 5);
    EXPECT_EQ(u.size(), 8u);
    EXPECT_EQ(u.name(0), "-2");
    EXPECT_EQ(*u.find("-1"), 1u);
    EXPECT_EQ(*u.find("5"), 7u);
    EXPECT_FALSE(u.find("6"));
    EXPECT_FALSE(u.find("x"));
    EXPECT_EQ(u.value(*u.of_value(3)), 3);
}

TEST(AllTuples, CountsAndOrder) {
    EXPECT_EQ(all_tuples(3, 0), TupleSet{Tuple{}});
    EXPECT_EQ(all_tuples(3, 2).size(), 9u);
    EXPECT_EQ(*all_tuples(2, 2).begin(), (Tuple{0, 0}));
    EXPECT_EQ(*all_tuples(2, 2).rbegin(), (Tuple{1, 1}));
}

TEST(EvalTerm, VariableLookup) {
    auto u = Universe::range(0, 8);
    Valuation val;
    val.push("x", *u.of_value(3));
    EXPECT_EQ(u.value(*eval_term(Term::var("x"), {}, u, val)), 3);
}

TEST(EvalTerm, SubtractionInsideTheUniverse) {
    auto u = Universe::range(0, 8);
    Valuation val;
    val.push("y", *u.of_value(5));
    val.push("x", *u.of_value(2));
    auto t = Term::apply("sub", {Term::var("y"), Term::var("x")});
    EXPECT_EQ(u.value(*eval_term(t, {}, u, val)), 3);
}

TEST(EvalTerm, SubtractionLeavingTheUniverseIsUndefined) {
    auto u = Universe::range(0, 8);
    Valuation val;
    val.push("y", *u.of_value(2));
    val.push("x", *u.of_value(5));
    auto t = Term::apply("sub", {Term::var("y"), Term::var("x")});
    EXPECT_FALSE(eval_term(t, {}, u, val));
    // undefinedness propagates through enclosing applications
    auto outer = Term::apply("add", {t, Term::constant(0)});
    EXPECT_FALSE(eval_term(outer, {}, u, val));
}

TEST(EvalTerm, ConstantIgnoresValuation) {
    auto u = Universe::range(0, 8);
    auto t = Term::apply("add", {Term::constant(2), Term::constant(3)});
    Valuation a, b;
    b.push("x", 7);
    EXPECT_EQ(eval_term(t, {}, u, a), eval_term(t, {}, u, b));
    EXPECT_EQ(u.value(*eval_term(t, {}, u, a)), 5);
}

TEST(EvalTerm, UnknownFunctionAndUnboundVariable) {
    auto u = Universe::symbolic({"a"});
    Valuation val;
    EXPECT_THROW(eval_term(Term::var("x"), {}, u, val), SignatureError);
    EXPECT_THROW(eval_term(Term::apply("f", {}), {}, u, val), SignatureError);
    // built-ins only exist on integer universes
    EXPECT_THROW(eval_term(Term::apply("add", {Term::constant(0), Term::constant(0)}), {}, u, val), SignatureError);
}

TEST(EvalTerm, TableFunctionsArePartial) {
    auto u = Universe::symbolic({"a", "b"});
    FunctionEnv fns;
    fns.define("next", {1, {{Tuple{0}, 1}}});
    Valuation val;
    EXPECT_EQ(*eval_term(Term::apply("next", {Term::constant(0)}), fns, u, val), 1u);
    EXPECT_FALSE(eval_term(Term::apply("next", {Term::constant(1)}), fns, u, val));
    EXPECT_THROW(fns.define("__f", {}), SignatureError);
}

TEST(Interpretation, EmptyAndMissingRelationsCompareEqual) {
    Interpretation a, b;
    a.declare("R");
    EXPECT_EQ(a, b);
    b.insert("R", {0});
    EXPECT_NE(a, b);
    EXPECT_TRUE(b.contains("R", {0}));
    EXPECT_TRUE(a.tuples("missing").empty());
}

namespace {

LayeredFormula tiny() {
    LayeredFormula f;
    f.universe = Universe::symbolic({"a", "b"});
    f.relations = {{"R", 1}, {"S", 1}};
    f.layers.push_back(Clause::define(
        Body::forall("x", Body::implies(Condition::query("R", {Term::var("x")}), Assertion{"S", {Term::var("x")}}))));
    return f;
}

}  // namespace

TEST(Validate, AcceptsClosedWellTypedFormula) { EXPECT_NO_THROW(validate(tiny())); }

TEST(Validate, RejectsArityMismatch) {
    auto f = tiny();
    f.layers[0].body.children[0].cond.args.push_back(Term::var("x"));
    EXPECT_THROW(validate(f), SignatureError);
}

TEST(Validate, RejectsFreeVariables) {
    auto f = tiny();
    f.layers[0].body.children[0].head.args[0] = Term::var("y");
    EXPECT_THROW(validate(f), SignatureError);
}

TEST(Validate, RejectsFactsOnAssertedRelations) {
    auto f = tiny();
    f.facts.insert("S", {0});
    EXPECT_THROW(validate(f), SignatureError);
    f = tiny();
    f.facts.insert("R", {0});
    EXPECT_NO_THROW(validate(f));
}

TEST(Validate, RejectsReservedAndUnknownRelations) {
    auto f = tiny();
    f.relations["__co_R"] = 1;
    EXPECT_THROW(validate(f), SignatureError);
    f = tiny();
    f.layers[0].body.children[0].head.relation = "Z";
    EXPECT_THROW(validate(f), SignatureError);
}

TEST(CheckInterpretation, RejectsOutOfRangeTuples) {
    auto f = tiny();
    Interpretation rho;
    rho.insert("R", {0});
    EXPECT_NO_THROW(check_interpretation(f, rho));
    rho.insert("R", {5});
    EXPECT_THROW(check_interpretation(f, rho), SignatureError);
    Interpretation bad;
    bad.insert("R", {0, 0});
    EXPECT_THROW(check_interpretation(f, bad), SignatureError);
}
