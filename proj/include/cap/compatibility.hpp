#pragma once

#include <optional>
#include <vector>

#include "cap/diagnostic.hpp"
#include "cap/syntax.hpp"
#include "cap/types.hpp"

namespace cap {

/// ⊢θ p : A
struct PatternJudgement {
  Bindings theta;
  Pattern pattern;
  MuType type;
};

/// True iff some substitution instance of p is q.
bool subsumes(const Pattern& p, const Pattern& q);

/// Maximal common positions of p and q where p's subpattern fails to subsume
/// q's, in lexicographic order.
std::vector<Position> mismatchPositions(const Pattern& p, const Pattern& q);

struct PositionWitness {
  Position position;
  SymbolSet first;   // symbols admitted by the earlier branch's type
  SymbolSet second;  // symbols admitted by the later branch's type
  bool disjoint() const;
};

struct PairCompatibility {
  bool subsumed = false;         // p subsumes q
  bool requiresSubtype = false;  // the later type must be a subtype of the earlier
  bool holds = true;             // the obligation, when there is one
  std::vector<Position> cpos;
  // Every position examined; stops at the first disjoint one unless explaining.
  std::vector<PositionWitness> witnesses;

  bool compatible() const { return !requiresSubtype || holds; }
};

/// Compatibility of an earlier branch `first` with a later branch `second`.
PairCompatibility checkCompatiblePair(const PatternJudgement& first, const PatternJudgement& second,
                                      bool explain = false);

/// Checks every pair i < j; the diagnostic names the first failing pair.
std::optional<Diagnostic> checkCompatibleList(const std::vector<PatternJudgement>& judgements,
                                              bool explain = false);

std::string toString(const SymbolSet& symbols);

}  // namespace cap
