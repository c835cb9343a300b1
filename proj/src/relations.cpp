#include "cap/relations.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace cap {

const char* toString(RelMode mode) { return mode == RelMode::Sub ? "sub" : "eq"; }

bool RelationEngine::relate(const MuType& a, const MuType& b) {
  Verdict v = relateAny(a, b);
  provisional_.clear();
  return v.holds;
}

RelationEngine::Verdict RelationEngine::relateAny(const MuType& a, const MuType& b) {
  if (structurallyEqual(a, b)) return {true, kNoDependency};
  const auto left = maximalUnionDecompose(a);
  const auto right = maximalUnionDecompose(b);
  int low = kNoDependency;
  auto covers = [&](const std::vector<MuType>& from, const std::vector<MuType>& to, bool flipped) {
    for (const auto& x : from) {
      bool found = false;
      for (const auto& y : to) {
        Verdict v = flipped ? relateComponents(y, x) : relateComponents(x, y);
        if (v.holds) {
          low = std::min(low, v.low);
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  };
  if (!covers(left, right, false)) return {false, kNoDependency};
  if (mode_ == RelMode::Eq && !covers(right, left, true)) return {false, kNoDependency};
  return {true, low};
}

RelationEngine::Verdict RelationEngine::relateComponents(const MuType& a, const MuType& b) {
  MuTypePair key{a, b};
  if (refuted_.count(key)) return {false, kNoDependency};
  if (proven_.count(key)) return {true, kNoDependency};
  if (auto it = onPath_.find(key); it != onPath_.end()) return {true, it->second};

  const int myDepth = depth_++;
  onPath_.emplace(key, myDepth);
  const std::size_t mark = provisional_.size();
  Verdict v = relateHeads(a, b);
  onPath_.erase(key);
  --depth_;

  if (!v.holds) {
    refuted_.insert(key);
    provisional_.resize(mark);
    return {false, kNoDependency};
  }
  if (v.low >= myDepth) {
    proven_.insert(key);
    for (std::size_t i = mark; i < provisional_.size(); ++i) proven_.insert(provisional_[i]);
    provisional_.resize(mark);
    return {true, kNoDependency};
  }
  provisional_.push_back(key);
  return v;
}

RelationEngine::Verdict RelationEngine::relateHeads(const MuType& a, const MuType& b) {
  if (a->kind() != b->kind()) return {false, kNoDependency};
  switch (a->kind()) {
    case TypeKind::Const:
      return {a->name() == b->name(), kNoDependency};
    case TypeKind::Var:
      if (a->isBound() || b->isBound()) throw std::logic_error("relation on a type with an escaping bound variable");
      return {a->name() == b->name(), kNoDependency};
    case TypeKind::App:
    case TypeKind::Arrow: {
      const bool contra = a->kind() == TypeKind::Arrow && mode_ == RelMode::Sub;
      Verdict first = contra ? relateAny(b->left(), a->left()) : relateAny(a->left(), b->left());
      if (!first.holds) return first;
      Verdict second = relateAny(a->right(), b->right());
      if (!second.holds) return second;
      return {true, std::min(first.low, second.low)};
    }
    case TypeKind::Union:
    case TypeKind::Rec:
      break;
  }
  throw std::logic_error("relateHeads expects non-union, non-recursive components");
}

bool isSubtype(const MuType& a, const MuType& b) { return RelationEngine(RelMode::Sub).relate(a, b); }

bool isEquivalent(const MuType& a, const MuType& b) { return RelationEngine(RelMode::Eq).relate(a, b); }

namespace {

class TreeRelation {
 public:
  explicit TreeRelation(RelMode mode) : mode_(mode) {}

  bool relate(FiniteTree a, FiniteTree b) {
    if (a == b) return true;
    auto key = std::make_pair(a, b);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<FiniteTree> left, right;
    flatten(a, left);
    flatten(b, right);
    bool holds = covers(left, right, false) && (mode_ == RelMode::Sub || covers(right, left, true));
    memo_.emplace(key, holds);
    return holds;
  }

 private:
  static void flatten(FiniteTree t, std::vector<FiniteTree>& out) {
    if (t->kind == TreeKind::Node && t->label == TreeLabel::Union) {
      flatten(t->left, out);
      flatten(t->right, out);
    } else {
      out.push_back(t);
    }
  }

  bool covers(const std::vector<FiniteTree>& from, const std::vector<FiniteTree>& to, bool flipped) {
    for (auto x : from) {
      bool found = false;
      for (auto y : to) {
        if (flipped ? heads(y, x) : heads(x, y)) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  }

  bool heads(FiniteTree a, FiniteTree b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case TreeKind::Bullet:
        return true;
      case TreeKind::Atom:
        return a->name == b->name;
      case TreeKind::Node:
        if (a->label != b->label) return false;
        if (a->label == TreeLabel::Arrow && mode_ == RelMode::Sub)
          return relate(b->left, a->left) && relate(a->right, b->right);
        return relate(a->left, b->left) && relate(a->right, b->right);
    }
    return false;
  }

  RelMode mode_;
  std::map<std::pair<FiniteTree, FiniteTree>, bool> memo_;
};

}  // namespace

bool finiteTreeRel(FiniteTree a, FiniteTree b, RelMode mode) { return TreeRelation(mode).relate(a, b); }

OracleReport oracleCompare(const MuType& a, const MuType& b, int kmax, RelMode mode,
                           std::optional<int> searchLimit) {
  if (kmax < 1) throw std::invalid_argument("oracleCompare needs kmax >= 1");
  OracleReport report;
  report.engine = RelationEngine(mode).relate(a, b);
  TreeFactory factory;
  TreeRelation trees(mode);
  auto atDepth = [&](int k) { return trees.relate(factory.truncate(a, k), factory.truncate(b, k)); };
  for (int k = 0; k <= kmax; ++k) report.perDepth.push_back(atDepth(k));

  if (report.engine) {
    report.agree = std::all_of(report.perDepth.begin(), report.perDepth.end(), [](bool v) { return v; });
    return report;
  }
  for (int k = 0; k <= kmax; ++k) {
    if (!report.perDepth[k]) {
      report.refutingDepth = k;
      return report;
    }
  }
  const int limit = searchLimit.value_or(2 * kmax);
  for (int k = kmax + 1; k <= limit; ++k) {
    if (!atDepth(k)) {
      report.refutingDepth = k;
      return report;
    }
  }
  report.inconclusive = true;
  return report;
}

}  // namespace cap
