#include <gtest/gtest.h>

#include "cap/relations.hpp"
#include "helpers.hpp"

namespace cap {
namespace {

using test::fOf;
using test::ty;

TEST(Subtype, DistinctPayloadsUnrelated) { EXPECT_FALSE(isSubtype(ty("Vl@Nat"), ty("Vl@(True + False)"))); }

TEST(Subtype, UnionRight) { EXPECT_TRUE(isSubtype(ty("True"), ty("True + False"))); }

TEST(Subtype, UnionLeftNeedsEveryComponent) {
  EXPECT_FALSE(isSubtype(ty("True + False"), ty("True")));
  EXPECT_TRUE(isSubtype(ty("False + True"), ty("True + False")));
}

TEST(Subtype, InfiniteListIntoList) { EXPECT_TRUE(isSubtype(ty("rec a. Cons@a"), ty("rec b. Cons@b + Nil"))); }

TEST(Subtype, ListNotIntoInfiniteList) { EXPECT_FALSE(isSubtype(ty("rec b. Cons@b + Nil"), ty("rec a. Cons@a"))); }

TEST(Subtype, ArrowContravariance) {
  EXPECT_TRUE(isSubtype(ty("True + False -> Nat"), ty("True -> Nat")));
  EXPECT_FALSE(isSubtype(ty("True -> Nat"), ty("True + False -> Nat")));
  EXPECT_TRUE(isSubtype(ty("Nat -> True"), ty("Nat -> True + False")));
}

TEST(Subtype, RecursiveArrows) {
  EXPECT_TRUE(isSubtype(ty("rec x. (True + False) -> x"), ty("rec y. True -> y")));
  EXPECT_FALSE(isSubtype(ty("rec y. True -> y"), ty("rec x. (True + False) -> x")));
}

TEST(Subtype, RecursiveDatatypeWidening) {
  EXPECT_TRUE(isSubtype(ty(fOf("Nat")), ty(fOf("Nat + True"))));
  EXPECT_FALSE(isSubtype(ty(fOf("Nat + True")), ty(fOf("Nat"))));
}

TEST(Subtype, UnfoldingIsInvisible) {
  MuType f = ty(fOf("Nat"));
  EXPECT_TRUE(isSubtype(f, unfoldOnce(f)));
  EXPECT_TRUE(isSubtype(unfoldOnce(f), f));
}

TEST(Equivalence, ContractionEquatesDifferentPeriods) {
  EXPECT_TRUE(isEquivalent(ty("rec x. Nat -> Nat -> x"), ty("rec x. Nat -> x")));
}

TEST(Equivalence, UnionCommutes) { EXPECT_TRUE(isEquivalent(ty("True + False"), ty("False + True"))); }

TEST(Equivalence, DistinctPayloads) { EXPECT_FALSE(isEquivalent(ty("Vl@Nat"), ty("Vl@(True + False)"))); }

TEST(Equivalence, ArrowIsInvariantUnderEquivalence) {
  EXPECT_FALSE(isEquivalent(ty("True + False -> Nat"), ty("True -> Nat")));
}

TEST(Equivalence, UnionIdempotent) {
  EXPECT_TRUE(isEquivalent(ty("Vl@Nat + Vl@Nat"), ty("Vl@Nat")));
}

TEST(Equivalence, StrictSubtypeIsNotEquivalent) {
  EXPECT_FALSE(isEquivalent(ty("rec a. Cons@a"), ty("rec b. Cons@b + Nil")));
}

TEST(TreeRelation, BulletRelatesToBullet) {
  TreeFactory f;
  EXPECT_TRUE(finiteTreeRel(f.bullet(), f.bullet(), RelMode::Sub));
  EXPECT_FALSE(finiteTreeRel(f.bullet(), f.atom("Nat"), RelMode::Sub));
}

TEST(TreeRelation, ArrowReflexive) {
  TreeFactory f;
  FiniteTree t = f.node(TreeLabel::Arrow, f.atom("A"), f.atom("B"));
  EXPECT_TRUE(finiteTreeRel(t, t, RelMode::Eq));
}

TEST(TreeRelation, AtomBelowUnion) {
  TreeFactory f;
  FiniteTree u = f.node(TreeLabel::Union, f.atom("True"), f.atom("False"));
  EXPECT_TRUE(finiteTreeRel(f.atom("True"), u, RelMode::Sub));
  EXPECT_FALSE(finiteTreeRel(f.atom("True"), u, RelMode::Eq));
}

TEST(Oracle, RefutesDistinctPayloads) {
  OracleReport r = oracleCompare(ty("Vl@Nat"), ty("Vl@(True + False)"), 4, RelMode::Sub);
  EXPECT_FALSE(r.engine);
  EXPECT_TRUE(r.agree);
  ASSERT_EQ(r.perDepth.size(), 5u);
  // Depth 2 is the first truncation that reaches the payload atoms.
  EXPECT_TRUE(r.perDepth[0]);
  EXPECT_TRUE(r.perDepth[1]);
  EXPECT_FALSE(r.perDepth[2]);
  ASSERT_TRUE(r.refutingDepth);
  EXPECT_EQ(*r.refutingDepth, 2);
}

TEST(Oracle, ReflexiveEquivalence) {
  MuType a = ty(fOf("Nat"));
  OracleReport r = oracleCompare(a, a, 4, RelMode::Eq);
  EXPECT_TRUE(r.engine);
  EXPECT_TRUE(r.agree);
  for (bool b : r.perDepth) EXPECT_TRUE(b);
}

TEST(Oracle, UnionSubtype) {
  OracleReport r = oracleCompare(ty("True"), ty("True + False"), 2, RelMode::Sub);
  EXPECT_TRUE(r.engine);
  EXPECT_TRUE(r.agree);
  EXPECT_EQ(r.perDepth, (std::vector<bool>{true, true, true}));
}

TEST(Oracle, ContractionAgreesAtEveryDepth) {
  OracleReport r = oracleCompare(ty("rec x. Nat -> Nat -> x"), ty("rec x. Nat -> x"), 8, RelMode::Eq);
  EXPECT_TRUE(r.engine);
  EXPECT_TRUE(r.agree);
}

TEST(Oracle, RejectsNonPositiveDepth) {
  EXPECT_THROW(oracleCompare(ty("Nat"), ty("Nat"), 0, RelMode::Sub), std::invalid_argument);
}

TEST(Engine, ReusableAcrossQueries) {
  RelationEngine e(RelMode::Sub);
  EXPECT_TRUE(e.relate(ty("rec a. Cons@a"), ty("rec b. Cons@b + Nil")));
  EXPECT_FALSE(e.relate(ty("rec b. Cons@b + Nil"), ty("rec a. Cons@a")));
  EXPECT_TRUE(e.relate(ty("rec a. Cons@a"), ty("rec b. Cons@b + Nil")));
}

}  // namespace
}  // namespace cap
