#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "cap/conformance.hpp"
#include "helpers.hpp"

namespace cap {
namespace {

using test::tm;
using test::ty;

SuiteOptions small(std::uint64_t seed) {
  SuiteOptions o;
  o.gen.seed = seed;
  o.cases = 100;
  o.pairs = 100;
  o.confluenceCases = 50;
  o.lawCases = 100;
  o.reproPath.clear();
  return o;
}

TEST(Checks, SubjectReductionFlagsWrongType) {
  auto c = checkSubjectReduction(tm("([x:Nat] x => Vl) Nat"), ty("Nat"));
  ASSERT_TRUE(c);
  EXPECT_EQ(c->property, "subject-reduction");
}

TEST(Checks, SubjectReductionAcceptsTypedTerm) {
  EXPECT_FALSE(checkSubjectReduction(tm("([x:Nat] x => Vl x) Nat"), ty("Vl@Nat")));
}

TEST(Checks, ProgressFlagsStuckTerm) {
  auto c = checkProgress(tm("([] Nil => C0) Cons"));
  ASSERT_TRUE(c);
  EXPECT_EQ(c->property, "progress");
}

TEST(Checks, ProgressAcceptsValue) { EXPECT_FALSE(checkProgress(tm("Cons Nil"))); }

TEST(Generator, TypedTermsTypeCheck) {
  Generator gen(GenConfig{});
  for (int i = 0; i < 200; ++i) {
    TypedTerm tt = gen.typedTerm();
    EXPECT_TRUE(freeVariables(tt.term).empty()) << pretty(tt.term);
    auto t = inferType({}, tt.term);
    ASSERT_TRUE(t) << pretty(tt.term);
    EXPECT_TRUE(structurallyEqual(*t, tt.type));
  }
}

TEST(Generator, InhabitantsHaveTheirType) {
  GenConfig cfg;
  cfg.seed = 5;
  Generator gen(cfg);
  int found = 0;
  for (int i = 0; i < 300; ++i) {
    MuType t = gen.type(8);
    auto v = gen.inhabitant(t, false);
    if (!v) continue;
    ++found;
    EXPECT_TRUE(isValue(*v)) << pretty(*v);
    auto inferred = inferType({}, *v);
    ASSERT_TRUE(inferred) << pretty(*v) << " : " << pretty(t);
    EXPECT_TRUE(isSubtype(*inferred, t)) << pretty(*v) << " : " << pretty(t);
  }
  EXPECT_GT(found, 200);
}

TEST(Generator, WidenAndNarrowAreSound) {
  Generator gen(GenConfig{});
  for (int i = 0; i < 300; ++i) {
    MuType t = gen.type();
    EXPECT_TRUE(isSubtype(t, gen.widen(t)));
    EXPECT_TRUE(isSubtype(gen.narrow(t), t));
  }
}

TEST(Generator, MutationStaysClosed) {
  Generator gen(GenConfig{});
  for (int i = 0; i < 200; ++i) {
    RawType r = gen.mutate(gen.rawType(10, false));
    auto t = validateType(r);
    if (t) EXPECT_TRUE(isClosed(*t));
  }
}

TEST(Suite, SmallRunPasses) {
  SuiteSummary s = runConformance(small(3));
  EXPECT_TRUE(s.passed()) << s.toText();
  EXPECT_EQ(s.differential.pairs, 100);
  for (const auto& p : s.properties) EXPECT_GT(p.checked, 0) << p.name;
}

TEST(Suite, DeterministicPerSeed) {
  auto a = runConformance(small(9), {true, false, false});
  auto b = runConformance(small(9), {true, false, false});
  ASSERT_EQ(a.properties.size(), b.properties.size());
  for (std::size_t i = 0; i < a.properties.size(); ++i) EXPECT_EQ(a.properties[i].checked, b.properties[i].checked);
}

TEST(Suite, JsonSummaryShape) {
  auto j = runConformance(small(4), {false, true, true}).toJson();
  EXPECT_EQ(j["seed"], 4);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_TRUE(j["properties"].is_array());
  EXPECT_EQ(j["differential"]["disagreements"], 0);
}

TEST(Suite, PassingRunWritesNoReproFile) {
  SuiteOptions o = small(6);
  o.reproPath = testing::TempDir() + "cap_repro_unused.txt";
  std::remove(o.reproPath.c_str());
  EXPECT_TRUE(runConformance(o, {false, false, true}).passed());
  EXPECT_FALSE(std::ifstream(o.reproPath).good());
}

}  // namespace
}  // namespace cap
