#include <gtest/gtest.h>

#include "cap/compatibility.hpp"
#include "cap/relations.hpp"
#include "cap/typecheck.hpp"
#include "helpers.hpp"

namespace cap {
namespace {

using namespace syn;
using test::fOf;
using test::ty;

PatternJudgement judge(Pattern p, Bindings theta) {
  auto t = typePattern(theta, p);
  if (!t) throw std::runtime_error(t.error().format());
  return {std::move(theta), std::move(p), *t};
}

const std::string kF = fOf("Nat");

PatternJudgement vlBranch() { return judge(pcomp(pc("Vl"), hat("z")), {{"z", ty("Nat")}}); }
PatternJudgement pairBranch() { return judge(pcomp(hat("x"), hat("y")), {{"x", ty(kF)}, {"y", ty(kF)}}); }
PatternJudgement leafBranch() { return judge(hat("w"), {{"w", ty("Cons + Node + Nil")}}); }

TEST(Subsumes, MatchableSubsumesAnything) { EXPECT_TRUE(subsumes(hat("x"), pcomp(pc("Vl"), pc("True")))); }

TEST(Subsumes, NestedInstance) {
  EXPECT_TRUE(subsumes(pcomp(pc("Vl"), hat("z")), pcomp(pc("Vl"), pcomp(pc("Cons"), hat("x")))));
}

TEST(Subsumes, ConstantDoesNotSubsumeMatchable) {
  EXPECT_FALSE(subsumes(pcomp(pc("Vl"), hat("z")), pcomp(hat("x"), hat("y"))));
}

TEST(MismatchPositions, ConstantAgainstMatchable) {
  EXPECT_EQ(mismatchPositions(pcomp(pc("Vl"), hat("z")), pcomp(hat("x"), hat("y"))), (std::vector<Position>{{1}}));
}

TEST(MismatchPositions, CompoundAgainstMatchable) {
  EXPECT_EQ(mismatchPositions(pcomp(pc("Vl"), hat("z")), hat("w")), (std::vector<Position>{Position{}}));
}

TEST(MismatchPositions, SelfIsEmpty) {
  Pattern p = pcomp(pcomp(pc("Cons"), hat("h")), hat("t"));
  EXPECT_TRUE(mismatchPositions(p, p).empty());
}

TEST(MismatchPositions, DistinctConstants) {
  EXPECT_EQ(mismatchPositions(pcomp(pc("C"), hat("z")), pcomp(pc("D"), hat("y"))), (std::vector<Position>{{1}}));
}

TEST(Pair, SubsumedPayloadsRequireSubtype) {
  auto first = judge(pcomp(pc("Vl"), hat("x")), {{"x", ty("True + False")}});
  auto second = judge(pcomp(pc("Vl"), hat("y")), {{"y", ty("Nat")}});
  PairCompatibility r = checkCompatiblePair(first, second);
  EXPECT_TRUE(r.subsumed);
  EXPECT_TRUE(r.requiresSubtype);
  EXPECT_FALSE(r.holds);
  EXPECT_FALSE(r.compatible());
}

TEST(Pair, TaggedValueAgainstRecursivePair) {
  PairCompatibility r = checkCompatiblePair(vlBranch(), pairBranch());
  EXPECT_FALSE(r.subsumed);
  EXPECT_FALSE(r.requiresSubtype);
  EXPECT_TRUE(r.compatible());
  EXPECT_EQ(lookupAdmitted(pairBranch().type, Position{1}).count("Vl"), 0u);
}

TEST(Pair, RecursivePairAgainstLeaves) {
  PairCompatibility r = checkCompatiblePair(pairBranch(), leafBranch());
  EXPECT_FALSE(r.requiresSubtype);
  EXPECT_TRUE(r.compatible());
}

TEST(Pair, ExplainListsEveryWitness) {
  PairCompatibility r = checkCompatiblePair(vlBranch(), leafBranch(), true);
  EXPECT_TRUE(r.compatible());
  ASSERT_EQ(r.witnesses.size(), r.cpos.size());
  EXPECT_TRUE(r.witnesses.front().disjoint());
}

TEST(List, UpdBranchesAreCompatible) {
  EXPECT_FALSE(checkCompatibleList({vlBranch(), pairBranch(), leafBranch()}));
}

TEST(List, UpdPrimeBranchesAreCompatible) {
  const std::string g = "(rec a. Vl@Nat + Vl2@(Nat -> Nat) + a@a + (Cons + Node + Nil))";
  std::vector<PatternJudgement> js = {
      judge(pcomp(pc("Vl"), hat("z")), {{"z", ty("Nat")}}),
      judge(pcomp(pc("Vl2"), hat("z")), {{"z", ty("Nat -> Nat")}}),
      judge(pcomp(hat("x"), hat("y")), {{"x", ty(g)}, {"y", ty(g)}}),
      judge(hat("w"), {{"w", ty("Cons + Node + Nil")}}),
  };
  EXPECT_FALSE(checkCompatibleList(js));
}

TEST(List, ExampleThreeReportsThePair) {
  auto first = judge(pcomp(pc("Vl"), hat("x")), {{"x", ty("True + False")}});
  auto second = judge(pcomp(pc("Vl"), hat("y")), {{"y", ty("Nat")}});
  second.pattern = PatternNode::compound(pc("Vl"), hat("y"), Span{3, 7});
  auto d = checkCompatibleList({first, second});
  ASSERT_TRUE(d);
  EXPECT_EQ(d->code, DiagnosticCode::Compatibility);
  EXPECT_EQ(d->span, (Span{3, 7}));
  EXPECT_EQ(d->expected, pretty(first.type));
  EXPECT_EQ(d->actual, pretty(second.type));
}

TEST(List, OverlappingCompoundNeedsSubtype) {
  // x y subsumes a compound-typed matchable only when its type is below.
  auto pair = judge(pcomp(hat("x"), hat("y")), {{"x", ty("Vl")}, {"y", ty("Nat")}});
  EXPECT_FALSE(checkCompatibleList({pair, judge(hat("z"), {{"z", ty("Vl@Nat")}})}));
  EXPECT_TRUE(checkCompatibleList({pair, judge(hat("z"), {{"z", ty("Cons@Nat")}})}));
}

}  // namespace
}  // namespace cap
