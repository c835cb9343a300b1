#include <gtest/gtest.h>

#include "cap/conformance.hpp"
#include "cap/types.hpp"
#include "helpers.hpp"

namespace cap {
namespace {

using test::fOf;
using test::ty;

TEST(HeadUnfold, OneFoldStep) {
  EXPECT_TRUE(structurallyEqual(headUnfold(ty("rec a. Vl@a")), ty("Vl@(rec a. Vl@a)")));
}

TEST(HeadUnfold, IdentityOnConstant) { EXPECT_TRUE(structurallyEqual(headUnfold(ty("Nil")), ty("Nil"))); }

TEST(HeadUnfold, UnfoldsUnionBody) {
  EXPECT_TRUE(structurallyEqual(headUnfold(ty("rec a. Cons@a + Nil")),
                                ty("Cons@(rec a. Cons@a + Nil) + Nil")));
}

TEST(HeadUnfold, NestedBinders) {
  MuType t = headUnfold(ty("rec a. rec b. Vl@a + b@b"));
  EXPECT_NE(t->kind(), TypeKind::Rec);
}

TEST(Decompose, BooleanUnion) {
  auto parts = maximalUnionDecompose(ty("True + False"));
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_TRUE(structurallyEqual(parts[0], ty("True")));
  EXPECT_TRUE(structurallyEqual(parts[1], ty("False")));
}

TEST(Decompose, RecursiveUnion) {
  MuType r = ty("rec a. Vl@Nat + a@a + Nil");
  auto parts = maximalUnionDecompose(r);
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_TRUE(structurallyEqual(parts[0], ty("Vl@Nat")));
  EXPECT_TRUE(structurallyEqual(parts[1], mu::app(r, r)));
  EXPECT_TRUE(structurallyEqual(parts[2], ty("Nil")));
}

TEST(Decompose, ArrowIsSingleComponent) {
  auto parts = maximalUnionDecompose(ty("Nat -> Nat"));
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0]->kind(), TypeKind::Arrow);
}

TEST(Lookup, HeadOfApplication) { EXPECT_EQ(lookupAdmitted(ty("Vl@Nat"), Position{1}), (SymbolSet{"Vl"})); }

TEST(Lookup, RecursiveDatatypeRoot) {
  EXPECT_EQ(lookupAdmitted(ty(fOf("Nat")), Position{}), (SymbolSet{"@", "Cons", "Node", "Nil"}));
}

TEST(Lookup, ConstantsOnlyExcludeApplication) {
  SymbolSet s = lookupAdmitted(ty("Cons + Node + Nil"), Position{});
  EXPECT_EQ(s, (SymbolSet{"Cons", "Node", "Nil"}));
  EXPECT_EQ(s.count("@"), 0u);
}

TEST(Lookup, ApplicationOfRecursiveTypesAtHead) {
  MuType f = ty(fOf("Nat"));
  EXPECT_EQ(lookupAdmitted(mu::app(f, f), Position{1}).count("Vl"), 0u);
}

TEST(Lookup, ArrowAdmitsArrowSymbol) {
  EXPECT_EQ(lookupAdmitted(ty("Nat -> Nat"), Position{}), (SymbolSet{std::string(kArrowSymbol)}));
}

TEST(Lookup, DescendsIntoArrows) { EXPECT_EQ(lookupAdmitted(ty("Nat -> True"), Position{2}), (SymbolSet{"True"})); }

TEST(Lookup, BeyondTheStructureIsEmpty) { EXPECT_TRUE(lookupAdmitted(ty("Vl@Nat"), Position{2, 1}).empty()); }

TEST(Truncate, DepthZeroIsBullet) {
  TreeFactory f;
  EXPECT_EQ(f.truncate(ty(fOf("Nat")), 0), f.bullet());
}

TEST(Truncate, ArrowAtDepthOne) {
  TreeFactory f;
  EXPECT_EQ(f.truncate(ty("Nat -> Nat"), 1), f.node(TreeLabel::Arrow, f.bullet(), f.bullet()));
}

TEST(Truncate, RecursiveListAtDepthTwo) {
  TreeFactory f;
  FiniteTree expected = f.node(TreeLabel::App, f.atom("Cons"), f.node(TreeLabel::App, f.bullet(), f.bullet()));
  EXPECT_EQ(f.truncate(ty("rec a. Cons@a"), 2), expected);
}

TEST(Truncate, UnionsDoNotConsumeDepth) {
  TreeFactory f;
  EXPECT_EQ(f.truncate(ty("True + False"), 1), f.node(TreeLabel::Union, f.atom("True"), f.atom("False")));
}

TEST(Truncate, RendersBullet) {
  TreeFactory f;
  EXPECT_EQ(toString(f.truncate(ty("Nat -> Nat"), 1)), "(• -> •)");
}

TEST(Sorts, DatatypeAndType) {
  EXPECT_EQ(sortOf(ty("Vl@Nat")), Sort::Datatype);
  EXPECT_EQ(sortOf(ty("Nat -> Nat")), Sort::Type);
  EXPECT_EQ(sortOf(ty("Nil + (Nat -> Nat)")), Sort::Type);
}

TEST(Contractive, GeneratedTypesAreContractiveAndClosed) {
  Generator gen(GenConfig{});
  for (int i = 0; i < 300; ++i) {
    MuType t = gen.type();
    EXPECT_TRUE(isContractive(t)) << pretty(t);
    EXPECT_TRUE(isClosed(t)) << pretty(t);
  }
}

TEST(Generator, SingleNodeBudgetGivesConstant) {
  GenConfig cfg;
  cfg.maxTypeNodes = 1;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    cfg.seed = seed;
    EXPECT_EQ(genType(cfg)->kind(), TypeKind::Const);
  }
}

TEST(Generator, Deterministic) {
  GenConfig cfg;
  cfg.seed = 42;
  EXPECT_TRUE(structurallyEqual(genType(cfg), genType(cfg)));
  EXPECT_TRUE(alphaEquivalent(genTypedTerm(cfg).term, genTypedTerm(cfg).term));
}

TEST(Generator, RejectsBadConfig) {
  GenConfig cfg;
  cfg.maxTypeNodes = 0;
  EXPECT_THROW(Generator{cfg}, std::invalid_argument);
  cfg = {};
  cfg.recProbability = 1.5;
  EXPECT_THROW(Generator{cfg}, std::invalid_argument);
}

}  // namespace
}  // namespace cap
