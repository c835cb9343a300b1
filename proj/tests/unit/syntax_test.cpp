#include <gtest/gtest.h>

#include "cap/syntax.hpp"
#include "helpers.hpp"

namespace cap {
namespace {

using namespace syn;
using test::tm;
using test::ty;

TEST(FreeNames, MatchablesOfCompound) {
  EXPECT_EQ(freeMatchables(pcomp(hat("x"), hat("y"))), (std::set<std::string>{"x", "y"}));
}

TEST(FreeNames, BinderRemovesMatchable) {
  EXPECT_TRUE(freeVariables(lam(hat("x"), {{"x", ty("Nat")}}, v("x"))).empty());
}

TEST(FreeNames, VariablesOfApplication) {
  EXPECT_EQ(freeVariables(app(v("f"), c("C"))), (std::set<std::string>{"f"}));
}

TEST(FreeNames, BranchBodySeesOnlyItsOwnBinders) {
  Term t = abs({Branch{hat("x"), {{"x", ty("Nat")}}, v("y")}, Branch{pc("Nil"), {}, v("x")}});
  EXPECT_EQ(freeVariables(t), (std::set<std::string>{"x", "y"}));
}

TEST(Linearity, RepeatedMatchableIsNonLinear) {
  EXPECT_TRUE(isLinear(pcomp(hat("x"), hat("y"))));
  EXPECT_FALSE(isLinear(pcomp(hat("x"), hat("x"))));
}

TEST(Positions, SubpatternAtLeft) {
  auto at = subpatternAt(pcomp(pc("Vl"), hat("z")), Position{1});
  ASSERT_TRUE(at);
  EXPECT_TRUE(structurallyEqual(*at, pc("Vl")));
}

TEST(Positions, AllPositionsOfCompound) {
  EXPECT_EQ(positions(pcomp(pc("Vl"), hat("z"))), (std::vector<Position>{Position{}, Position{1}, Position{2}}));
}

TEST(Positions, InvalidPositionOnVariable) { EXPECT_FALSE(subtermAt(v("x"), Position{1})); }

TEST(Substitution, ReplacesVariable) {
  EXPECT_TRUE(alphaEquivalent(applySubstitution({{"x", c("U")}}, v("x")), c("U")));
}

TEST(Substitution, BoundVariableUnchanged) {
  Term t = lam(hat("x"), {{"x", ty("Nat")}}, v("x"));
  EXPECT_TRUE(alphaEquivalent(applySubstitution({{"x", c("U")}}, t), t));
}

TEST(Substitution, InstantiatesBodyOfMatch) {
  EXPECT_TRUE(alphaEquivalent(applySubstitution({{"z", c("False")}}, app(c("Vl"), v("z"))), app(c("Vl"), c("False"))));
}

TEST(Substitution, AvoidsCapture) {
  // {y/x} under a branch binding y must rename the binder.
  Term t = lam(hat("y"), {{"y", ty("Nat")}}, app(v("x"), v("y")));
  Term r = applySubstitution({{"x", v("y")}}, t);
  ASSERT_EQ(r->kind, TermKind::Abs);
  const Branch& b = r->branches.front();
  ASSERT_EQ(b.pattern->kind, PatternKind::Matchable);
  EXPECT_NE(b.pattern->name, "y");
  EXPECT_EQ(b.bindings.count(b.pattern->name), 1u);
  EXPECT_TRUE(alphaEquivalent(b.body, app(v("y"), v(b.pattern->name))));
  EXPECT_EQ(freeVariables(r), (std::set<std::string>{"y"}));
}

TEST(Classify, ConstantIsValueAndMatchableForm) {
  EXPECT_EQ(classify(c("Nil")), TermClass::ValueAndMatchableForm);
}

TEST(Classify, RedexIsNeither) {
  EXPECT_EQ(classify(app(lam(hat("x"), {{"x", ty("Nat")}}, v("x")), c("C"))), TermClass::Neither);
}

TEST(Classify, DataStructureWithRedexArgument) {
  Term t = app(c("Cons"), app(lam(hat("x"), {{"x", ty("Nat")}}, v("x")), c("Nil")));
  EXPECT_TRUE(isDataStructure(t));
  EXPECT_TRUE(isMatchableForm(t));
  EXPECT_FALSE(isValue(t));
  EXPECT_EQ(classify(t), TermClass::MatchableForm);
}

TEST(Classify, VariableIsValueButNotMatchableForm) { EXPECT_EQ(classify(v("x")), TermClass::Value); }

TEST(Classify, VariableHeadedApplication) {
  EXPECT_EQ(classify(app(v("x"), c("D"))), TermClass::Value);
  EXPECT_EQ(classify(app(v("x"), tm("([y:Nat] y => y) Nat"))), TermClass::Neither);
}

TEST(Classify, AbstractionIsValue) {
  EXPECT_EQ(classify(lam(hat("x"), {{"x", ty("Nat")}}, v("x"))), TermClass::ValueAndMatchableForm);
}

TEST(AlphaEquivalence, RenamedBinders) {
  EXPECT_TRUE(alphaEquivalent(tm("[x:Nat] Vl x => x"), tm("[y:Nat] Vl y => y")));
  EXPECT_FALSE(alphaEquivalent(tm("[x:Nat] Vl x => x"), tm("[y:Nat] Vl y => Vl")));
  EXPECT_FALSE(alphaEquivalent(tm("[x:Nat] Vl x => x"), tm("[x:True] Vl x => x")));
}

TEST(PatternAsTerm, MapsMatchablesToVariables) {
  EXPECT_TRUE(alphaEquivalent(patternAsTerm(pcomp(pc("Vl"), hat("z"))), app(c("Vl"), v("z"))));
}

TEST(FreshName, AvoidsTakenNames) {
  std::string n = freshName("x", {"x", "x1"});
  EXPECT_NE(n, "x");
  EXPECT_NE(n, "x1");
}

}  // namespace
}  // namespace cap
