#include "cap/compatibility.hpp"

#include <algorithm>

#include "cap/relations.hpp"
#include "cap/surface.hpp"

namespace cap {

bool subsumes(const Pattern& p, const Pattern& q) {
  switch (p->kind) {
    case PatternKind::Matchable:
      return true;
    case PatternKind::Constant:
      return q->kind == PatternKind::Constant && q->name == p->name;
    case PatternKind::Compound:
      return q->kind == PatternKind::Compound && subsumes(p->left, q->left) && subsumes(p->right, q->right);
  }
  return false;
}

namespace {

// Maximal common positions are the leaves of the intersection of both shapes.
void commonLeaves(const Pattern& p, const Pattern& q, const Position& at, std::vector<Position>& out,
                  std::vector<std::pair<Pattern, Pattern>>& subs) {
  if (p->kind == PatternKind::Compound && q->kind == PatternKind::Compound) {
    commonLeaves(p->left, q->left, at.child(1), out, subs);
    commonLeaves(p->right, q->right, at.child(2), out, subs);
    return;
  }
  out.push_back(at);
  subs.emplace_back(p, q);
}

}  // namespace

std::vector<Position> mismatchPositions(const Pattern& p, const Pattern& q) {
  std::vector<Position> leaves;
  std::vector<std::pair<Pattern, Pattern>> subs;
  commonLeaves(p, q, Position{}, leaves, subs);
  std::vector<Position> out;
  for (std::size_t i = 0; i < leaves.size(); ++i)
    if (!subsumes(subs[i].first, subs[i].second)) out.push_back(leaves[i]);
  return out;
}

bool PositionWitness::disjoint() const {
  return std::none_of(first.begin(), first.end(), [&](const std::string& s) { return second.count(s) > 0; });
}

PairCompatibility checkCompatiblePair(const PatternJudgement& first, const PatternJudgement& second,
                                      bool explain) {
  PairCompatibility result;
  result.subsumed = subsumes(first.pattern, second.pattern);
  if (!result.subsumed) {
    result.cpos = mismatchPositions(first.pattern, second.pattern);
    bool overlapEverywhere = true;
    for (const auto& pi : result.cpos) {
      PositionWitness w{pi, lookupAdmitted(first.type, pi), lookupAdmitted(second.type, pi)};
      bool disjoint = w.disjoint();
      result.witnesses.push_back(std::move(w));
      if (disjoint) {
        overlapEverywhere = false;
        if (!explain) break;
      }
    }
    if (!overlapEverywhere) return result;
  }
  result.requiresSubtype = true;
  result.holds = isSubtype(second.type, first.type);
  return result;
}

std::string toString(const SymbolSet& symbols) {
  std::string out = "{";
  bool firstItem = true;
  for (const auto& s : symbols) {
    if (!firstItem) out += ", ";
    firstItem = false;
    out += s;
  }
  return out + "}";
}

std::optional<Diagnostic> checkCompatibleList(const std::vector<PatternJudgement>& judgements, bool explain) {
  for (std::size_t j = 1; j < judgements.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      PairCompatibility pair = checkCompatiblePair(judgements[i], judgements[j], explain);
      if (pair.compatible()) continue;
      std::string where;
      if (pair.subsumed) {
        where = "its pattern is subsumed by branch " + std::to_string(i + 1) + "'s";
      } else {
        where = "the mismatching positions";
        for (const auto& w : pair.witnesses)
          where += " " + w.position.toString() + " " + toString(w.first) + "/" + toString(w.second);
        where += " admit common symbols";
      }
      Diagnostic d = makeDiagnostic(DiagnosticCode::Compatibility, "incompatible-branches",
                                    "branches " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                        " are incompatible: " + where + ", so branch " +
                                        std::to_string(j + 1) + "'s type must be a subtype of branch " +
                                        std::to_string(i + 1) + "'s",
                                    judgements[j].pattern->span);
      d.expected = pretty(judgements[i].type);
      d.actual = pretty(judgements[j].type);
      return d;
    }
  }
  return std::nullopt;
}

}  // namespace cap
