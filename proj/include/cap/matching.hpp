#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cap/diagnostic.hpp"
#include "cap/syntax.hpp"

namespace cap {

enum class MatchKind { Success, Fail, Wait };

struct MatchOutcome {
  MatchKind kind = MatchKind::Wait;
  Substitution sigma;  // Success only

  static MatchOutcome success(Substitution s = {}) { return {MatchKind::Success, std::move(s)}; }
  static MatchOutcome fail() { return {MatchKind::Fail, {}}; }
  static MatchOutcome wait() { return {MatchKind::Wait, {}}; }
  bool succeeded() const { return kind == MatchKind::Success; }
};

const char* toString(MatchKind kind);

/// Disjoint union of outcomes; Fail dominates Wait. Throws std::logic_error
/// when two successes bind the same name.
MatchOutcome combineOutcomes(const MatchOutcome& a, const MatchOutcome& b);

MatchOutcome matchPattern(const Pattern& p, const Term& u);

/// Branch selected by the β-rule for `arg`: the least j whose match succeeds
/// while every earlier branch fails. Fail when every branch fails; Wait when
/// an earlier branch is undecided.
struct BranchChoice {
  MatchKind kind = MatchKind::Wait;
  int branch = -1;
  Substitution sigma;
};
BranchChoice selectBranch(const Term& abs, const Term& arg);

inline constexpr int kDefaultFuel = 100000;

enum class StepKind { Reduced, Normal, Stuck };

struct StepResult {
  StepKind kind = StepKind::Normal;
  Term term;                        // the reduct when Reduced
  std::optional<Diagnostic> stuck;  // when Stuck
  Position redex;                   // position of the contracted or stuck redex
  int branch = -1;                  // 0-based branch selected by β
};

/// One weak call-by-value step: function position to a value, then the
/// argument, then β. Never reduces under an abstraction.
StepResult smallStep(const Term& t);

enum class EvalStatus { Normal, Stuck, OutOfFuel };

struct TraceEntry {
  int step;
  Position redex;
  int branch;
};

struct EvalResult {
  EvalStatus status = EvalStatus::Normal;
  Term term;  // the last term reached
  int steps = 0;
  std::optional<Diagnostic> diagnostic;
  std::vector<TraceEntry> trace;
};

EvalResult evaluate(const Term& t, int fuel = kDefaultFuel, bool recordTrace = false);

// Unrestricted reduction, for confluence checks. A redex site is addressed by
// a path whose steps are 1 (function), 2 (argument) or 3+i (body of branch i).
using RedexPath = std::vector<int>;

/// Contracts App(abstraction, u) when β decides a branch; u need not be a value.
std::optional<Term> betaContract(const Term& redex);
std::vector<RedexPath> redexSites(const Term& t);
Term contractAt(const Term& t, const RedexPath& path);

struct NormalizeResult {
  bool terminated = false;
  Term term;
  int steps = 0;
};

/// Weak call-by-value evaluation followed by leftmost-outermost reduction
/// under binders until no redex remains.
NormalizeResult normalizeCbvThenStrong(const Term& t, int fuel);

/// Contracts uniformly random redex sites until none remains.
NormalizeResult normalizeRandom(const Term& t, int fuel, std::mt19937_64& rng);

}  // namespace cap
