#pragma once

#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cap/types.hpp"

namespace cap {

enum class RelMode { Sub, Eq };

const char* toString(RelMode mode);

/// Coinductive decision procedure for ≤μ / ≡μ on closed contractive μ-types.
///
/// Pairs of non-union components under examination sit on a path; meeting a
/// pair again on the path assumes it. Negative verdicts are cached outright.
/// A positive verdict is cached once the oldest path entry it relied on has
/// itself been confirmed. Free type variables behave as rigid atoms.
///
/// An engine may be reused across queries of the same mode; its caches only
/// hold verdicts that are valid without assumptions.
class RelationEngine {
 public:
  explicit RelationEngine(RelMode mode) : mode_(mode) {}

  bool relate(const MuType& a, const MuType& b);
  RelMode mode() const { return mode_; }

 private:
  struct Verdict {
    bool holds;
    int low;  // shallowest path depth relied upon; kNoDependency when none
  };
  static constexpr int kNoDependency = 1 << 30;

  Verdict relateAny(const MuType& a, const MuType& b);
  Verdict relateComponents(const MuType& a, const MuType& b);
  Verdict relateHeads(const MuType& a, const MuType& b);

  using PairSet = std::unordered_set<MuTypePair, MuTypePairHash, MuTypePairEqual>;

  RelMode mode_;
  std::unordered_map<MuTypePair, int, MuTypePairHash, MuTypePairEqual> onPath_;
  PairSet proven_;
  PairSet refuted_;
  std::vector<MuTypePair> provisional_;
  int depth_ = 0;
};

bool isSubtype(const MuType& a, const MuType& b);
bool isEquivalent(const MuType& a, const MuType& b);

/// The relation on finite trees, by structural recursion. The truncation
/// frontier relates only to itself.
bool finiteTreeRel(FiniteTree a, FiniteTree b, RelMode mode);

struct OracleReport {
  bool engine = false;
  // Verdict on the depth-k truncations for k = 0..kmax.
  std::vector<bool> perDepth;
  // For engine-false pairs, the first depth whose truncations are unrelated,
  // searched up to the extended limit.
  std::optional<int> refutingDepth;
  // Engine false and no refutation found within the limit.
  bool inconclusive = false;
  bool agree = true;
};

/// Compares the engine against truncations. Engine-false pairs are searched
/// for a refuting depth up to `searchLimit` (defaults to 2·kmax).
OracleReport oracleCompare(const MuType& a, const MuType& b, int kmax, RelMode mode,
                           std::optional<int> searchLimit = std::nullopt);

}  // namespace cap
