#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cap/matching.hpp"
#include "cap/relations.hpp"
#include "cap/surface.hpp"
#include "cap/syntax.hpp"
#include "cap/typecheck.hpp"
#include "cap/types.hpp"

namespace cap {

struct GenConfig {
  std::uint64_t seed = 1;
  int maxTypeNodes = 12;
  int maxTermNodes = 32;
  int maxUnionWidth = 3;
  double recProbability = 0.3;

  // Throws std::invalid_argument when a bound is not positive or the
  // probability lies outside [0, 1].
  void validate() const;
};

class GenerationExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TypedTerm {
  Term term;
  MuType type;
};

struct TypedPattern {
  Pattern pattern;
  Bindings theta;
  MuType type;
};

/// Seeded generator of sorted contractive types, typed patterns, typed
/// closed terms and inhabitants. Output is a pure function of the seed and
/// the sequence of calls.
class Generator {
 public:
  explicit Generator(GenConfig config);

  std::mt19937_64& rng() { return rng_; }
  const GenConfig& config() const { return config_; }

  /// Raw type of at most `maxNodes` nodes, closed; binder names are fresh.
  RawType rawType(int maxNodes, bool datatype);
  /// rawType followed by validateType; throws std::logic_error if the
  /// generator produced an invalid type.
  MuType type(int maxNodes, bool datatype = false);
  MuType type() { return type(config_.maxTypeNodes); }

  /// A type that is a supertype (widen) or subtype (narrow) of `t`.
  MuType widen(const MuType& t, int depth = 0);
  MuType narrow(const MuType& t, int depth = 0);

  /// Closed raw type obtained by one random edit of `raw`; may be ill-sorted.
  RawType mutate(const RawType& raw);

  TypedPattern pattern(int maxNodes);

  /// Closed term whose inferred type is a subtype of `t`. With
  /// `allowRedexes` unset the result is a value.
  std::optional<Term> inhabitant(const MuType& t, bool allowRedexes, int depth = 0);

  /// Closed typed term; the reported type is the inferred one. Throws
  /// GenerationExhausted after bounded retries.
  TypedTerm typedTerm(int maxNodes);
  TypedTerm typedTerm() { return typedTerm(config_.maxTermNodes); }

  bool chance(double p);

 private:
  struct ScopeEntry {
    std::string name;
    bool datatype;
    bool guarded;
  };

  RawType rawGen(int budget, bool datatype, std::vector<ScopeEntry>& scope, bool allowUnion);
  std::optional<Term> term(int budget, const TypeEnv& gamma);
  std::optional<Term> abstraction(int budget, const TypeEnv& gamma);
  std::optional<Term> dataHead(int budget, const TypeEnv& gamma);
  Pattern patternGen(int budget, bool datatype, Bindings& theta);
  std::string freshMatchable();
  std::string constant();
  int uniform(int lo, int hi);

  GenConfig config_;
  std::mt19937_64 rng_;
  int counter_ = 0;
};

MuType genType(const GenConfig& config);
TypedTerm genTypedTerm(const GenConfig& config);

struct Counterexample {
  std::string property;
  std::string detail;
  std::string term;
  std::string type;
};

/// Re-checks every reduct along the call-by-value trace against `type`.
std::optional<Counterexample> checkSubjectReduction(const Term& t, const MuType& type, int fuel = 1000);

/// Every non-value along the trace must make a step.
std::optional<Counterexample> checkProgress(const Term& t, int fuel = 1000);

struct DifferentialSummary {
  int pairs = 0;
  int kmax = 0;
  int comparisons = 0;  // pairs × modes
  int engineTrue = 0;
  int engineFalse = 0;
  int disagreements = 0;
  int refutedWithinLimit = 0;  // engine false with a refuting depth ≤ 2·kmax
  int inconclusive = 0;        // engine false, no refutation within 2·kmax
  int reverifiedRefuted = 0;   // inconclusive ones refuted at depth ≤ 4·kmax
  int contradictions = 0;      // disagreements found during re-verification
  std::vector<Counterexample> failures;

  double refutedFraction() const;
  bool passed() const;
};

DifferentialSummary runDifferential(const GenConfig& config, int pairs, int kmax);

struct PropertyResult {
  std::string name;
  int cases = 0;    // instances examined
  int checked = 0;  // instances whose premise held
  int failures = 0;
  std::vector<Counterexample> examples;  // first few failures
  double seconds = 0;
  bool passed() const { return failures == 0; }
};

struct SuiteOptions {
  GenConfig gen;
  int cases = 500;           // subject reduction, progress and successful match
  int pairs = 1000;          // differential oracle
  int kmax = 8;
  int confluenceCases = 200;
  int lawCases = 500;
  int fuel = 1000;
  std::string reproPath = "cap-conform-repro.txt";
};

struct SuiteSummary {
  std::uint64_t seed = 0;
  std::vector<PropertyResult> properties;
  DifferentialSummary differential;
  double seconds = 0;

  bool passed() const;
  nlohmann::json toJson() const;
  std::string toText() const;
};

struct PropertyFilter {
  bool metatheory = true;    // subject reduction, progress, successful match, confluence, lemmas
  bool differential = true;
  bool laws = true;
};

/// Runs the selected property suites. Counterexamples are appended to the
/// reproduction file together with the seed; nothing is written when all
/// properties hold.
SuiteSummary runConformance(const SuiteOptions& options, const PropertyFilter& filter = {});

// Individual suites, each deterministic per seed.
PropertyResult runSubjectReduction(const SuiteOptions& options);
PropertyResult runProgress(const SuiteOptions& options);
PropertyResult runSuccessfulMatch(const SuiteOptions& options);
PropertyResult runConfluence(const SuiteOptions& options);
PropertyResult runCompatibilityLemma(const SuiteOptions& options);
PropertyResult runMismatchLemma(const SuiteOptions& options);
std::vector<PropertyResult> runRelationLaws(const SuiteOptions& options);

}  // namespace cap
