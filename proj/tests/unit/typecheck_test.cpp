#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cap/relations.hpp"
#include "cap/typecheck.hpp"
#include "helpers.hpp"

namespace cap {
namespace {

using namespace syn;
using test::fOf;
using test::prog;
using test::tm;
using test::ty;

std::string readCorpus(const std::string& name) {
  std::ifstream in(test::kCorpusDir + "/" + name);
  if (!in) throw std::runtime_error("missing corpus file " + name);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::optional<Diagnostic> firstDiagnostic(const std::vector<DeclResult>& results) {
  for (const auto& r : results)
    if (r.diagnostic) return r.diagnostic;
  return std::nullopt;
}

TEST(TypePattern, TaggedMatchable) {
  auto t = typePattern({{"z", ty("Nat")}}, pcomp(pc("Vl"), hat("z")));
  ASSERT_TRUE(t);
  EXPECT_TRUE(structurallyEqual(*t, ty("Vl@Nat")));
}

TEST(TypePattern, PairOfRecursiveTypes) {
  MuType f = ty(fOf("Nat"));
  auto t = typePattern({{"x", f}, {"y", f}}, pcomp(hat("x"), hat("y")));
  ASSERT_TRUE(t);
  EXPECT_TRUE(structurallyEqual(*t, mu::app(f, f)));
}

TEST(TypePattern, UnboundMatchable) {
  auto t = typePattern({}, hat("x"));
  ASSERT_FALSE(t);
  EXPECT_EQ(t.error().kind, "unbound-matchable");
}

TEST(TypePattern, HeadMustBeDatatype) {
  auto t = typePattern({{"x", ty("Nat -> Nat")}, {"y", ty("Nat")}}, pcomp(hat("x"), hat("y")));
  ASSERT_FALSE(t);
  EXPECT_EQ(t.error().code, DiagnosticCode::Sort);
}

TEST(Infer, Constant) {
  auto t = inferType({}, c("Nil"));
  ASSERT_TRUE(t);
  EXPECT_TRUE(structurallyEqual(*t, ty("Nil")));
}

TEST(Infer, UpdInnerAbstraction) {
  const std::string f = fOf("Nat");
  TypeEnv gamma = {{"upd", ty("(Nat -> Nat) -> " + f + " -> " + f)}, {"f", ty("Nat -> Nat")}};
  Term inner = tm("[z: Nat] Vl z => Vl (f z) | [x: " + f + ", y: " + f + "] x y => (upd f x) (upd f y)"
                  " | [w: Cons + Node + Nil] w => w");
  auto t = inferType(gamma, inner);
  ASSERT_TRUE(t) << t.error().format();
  EXPECT_TRUE(isEquivalent(*t, ty(f + " -> " + f))) << pretty(*t);
}

TEST(Infer, ArgumentMismatch) {
  auto t = inferType({}, tm("([x:Nat] Vl x => x) (Vl True)"));
  ASSERT_FALSE(t);
  EXPECT_EQ(t.error().kind, "argument-mismatch");
  EXPECT_EQ(t.error().expected, "Vl@Nat");
  EXPECT_EQ(t.error().actual, "Vl@True");
}

TEST(Infer, UnboundVariable) {
  auto t = inferType({}, v("x"));
  ASSERT_FALSE(t);
  EXPECT_EQ(t.error().kind, "unbound-variable");
}

TEST(Infer, DataStructureApplication) {
  auto t = inferType({}, tm("Cons Nat Nil"));
  ASSERT_TRUE(t);
  EXPECT_TRUE(structurallyEqual(*t, ty("Cons@Nat@Nil")));
}

TEST(Infer, NonFunctionNotApplicable) {
  TypeEnv gamma = {{"g", ty("Nil + (Nat -> Nat)")}};
  auto t = inferType(gamma, app(v("g"), c("Nat")));
  ASSERT_FALSE(t);
  EXPECT_EQ(t.error().kind, "not-applicable");
}

TEST(Infer, UnionOfArrowsApplies) {
  TypeEnv gamma = {{"g", ty("(Nat -> True) + (Nat + Vl -> False)")}};
  auto t = inferType(gamma, app(v("g"), c("Nat")));
  ASSERT_TRUE(t) << t.error().format();
  EXPECT_TRUE(isEquivalent(*t, ty("True + False")));
}

TEST(Infer, MultiBranchJoinsDomainsAndBodies) {
  auto t = inferType({}, tm("[] True => C1 | [] False => C0"));
  ASSERT_TRUE(t);
  EXPECT_TRUE(isEquivalent(*t, ty("True + False -> C1 + C0")));
}

TEST(Infer, BodyJoinPrefersAnUpperBound) {
  auto t = inferType({}, tm("[] True => Nat | [x: Nat + Vl] x => x"));
  ASSERT_TRUE(t);
  EXPECT_EQ(pretty(*t), "True + (Nat + Vl) -> Nat + Vl");
}

TEST(Infer, ExampleSixArgumentUnion) {
  auto t = inferType({}, tm("([] True => C1 | [] False => C0) (([] True => False | [] False => True) True)"));
  ASSERT_TRUE(t) << t.error().format();
  EXPECT_TRUE(isEquivalent(*t, ty("C1 + C0")));
}

TEST(Check, SubsumptionOverConstant) { EXPECT_FALSE(checkType({}, c("True"), ty("True + False"))); }

TEST(Check, SubtypeMismatch) {
  auto d = checkType({}, c("True"), ty("False"));
  ASSERT_TRUE(d);
  EXPECT_EQ(d->kind, "subtype-mismatch");
}

TEST(Check, IncompatibleAbstractionRejectedAtAnyType) {
  Term t = tm("[x: True + False] Vl x => x | [y: Nat] Vl y => y");
  for (const char* expected : {"Nat", "Vl@Nat -> Nat", "(Vl@(True + False) + Vl@Nat) -> (True + False + Nat)"}) {
    auto d = checkType({}, t, ty(expected));
    ASSERT_TRUE(d);
    EXPECT_EQ(d->code, DiagnosticCode::Compatibility);
  }
}

TEST(Program, DefinitionsExtendTheEnvironment) {
  auto results = checkProgram(prog("def not = [] True => False | [] False => True; check not True : True + False;"));
  ASSERT_EQ(results.size(), 2u);
  EXPECT_FALSE(results[0].diagnostic);
  EXPECT_FALSE(results[1].diagnostic);
}

TEST(Program, DiagnosticsCarryDeclarationIndex) {
  auto results = checkProgram(prog("eval Nil; check True : False;"));
  ASSERT_TRUE(results[1].diagnostic);
  EXPECT_EQ(results[1].diagnostic->decl, 1);
}

TEST(Program, EvaluationInlinesDefinitions) {
  ProgramOptions options;
  options.evaluate = true;
  auto results = checkProgram(prog("def not = [] True => False | [] False => True; eval not (not True);"), options);
  ASSERT_TRUE(results[1].evaluation);
  EXPECT_TRUE(alphaEquivalent(results[1].evaluation->term, c("True")));
}

TEST(Session, KeepsEnvironmentAcrossCalls) {
  Session s;
  auto p1 = prog("assume f : Nat -> Vl;");
  auto p2 = prog("check f Nat : Vl;");
  EXPECT_FALSE(s.process(p1.decls[0], 0).diagnostic);
  EXPECT_FALSE(s.process(p2.decls[0], 1).diagnostic);
  EXPECT_EQ(s.env().count("f"), 1u);
}

struct CorpusCase {
  const char* file;
  std::optional<DiagnosticCode> code;
  const char* kind;
};

class Corpus : public testing::TestWithParam<CorpusCase> {};

TEST_P(Corpus, Verdict) {
  const CorpusCase& c = GetParam();
  auto d = firstDiagnostic(checkProgram(prog(readCorpus(c.file))));
  if (!c.code) {
    EXPECT_FALSE(d) << d->format();
    return;
  }
  ASSERT_TRUE(d);
  EXPECT_EQ(d->code, *c.code);
  EXPECT_EQ(d->kind, c.kind);
}

INSTANTIATE_TEST_SUITE_P(
    Files, Corpus,
    testing::Values(CorpusCase{"upd.cap", std::nullopt, ""}, CorpusCase{"upd_prime.cap", std::nullopt, ""},
                    CorpusCase{"ex4_ok.cap", std::nullopt, ""}, CorpusCase{"ex6.cap", std::nullopt, ""},
                    CorpusCase{"ex7.cap", std::nullopt, ""}, CorpusCase{"ex8_ok.cap", std::nullopt, ""},
                    CorpusCase{"nil_vs_cons.cap", DiagnosticCode::Type, "argument-mismatch"},
                    CorpusCase{"vl_true.cap", DiagnosticCode::Type, "argument-mismatch"},
                    CorpusCase{"compat_bool_nat.cap", DiagnosticCode::Compatibility, "incompatible-branches"},
                    CorpusCase{"ex4_fail.cap", DiagnosticCode::Compatibility, "incompatible-branches"},
                    CorpusCase{"ex8_fail.cap", DiagnosticCode::Compatibility, "incompatible-branches"}),
    [](const testing::TestParamInfo<CorpusCase>& info) {
      std::string name = info.param.file;
      return name.substr(0, name.find('.'));
    });

TEST(CorpusTypes, UpdTypeIsEquivalentToTheStatedOne) {
  auto results = checkProgram(prog(readCorpus("upd.cap")));
  ASSERT_EQ(results.size(), 2u);
  const std::string f = fOf("Nat");
  EXPECT_TRUE(isEquivalent(results[1].type, ty("(Nat -> Nat) -> " + f + " -> " + f)));
}

}  // namespace
}  // namespace cap
