#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cap/position.hpp"

namespace cap {

// Sort of a type expression: datatypes are the strict subset of types that may
// stand left of `@`.
enum class Sort { Datatype, Type };

enum class TypeKind { Const, Var, App, Arrow, Union, Rec };

class MuTypeNode;
using MuType = std::shared_ptr<const MuTypeNode>;

/// Immutable μ-type node.
///
/// Bound variables use de Bruijn indices (index 0 refers to the nearest
/// enclosing `Rec`), so structural equality is α-equivalence. Free variables
/// carry their name and index -1. Binder names are kept only as printing
/// hints and never take part in equality or hashing.
class MuTypeNode {
 public:
  TypeKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  Sort sort() const { return sort_; }
  int index() const { return index_; }
  bool isBound() const { return kind_ == TypeKind::Var && index_ >= 0; }
  const MuType& left() const { return left_; }
  const MuType& right() const { return right_; }
  const MuType& body() const { return left_; }
  std::size_t hash() const { return hash_; }
  // Number of syntax nodes.
  int size() const { return size_; }
  // One more than the largest de Bruijn index escaping this node; 0 when no
  // bound variable escapes.
  int looseBound() const { return loose_; }

  static MuType makeConst(std::string name);
  static MuType makeFreeVar(std::string name, Sort sort);
  static MuType makeBoundVar(int index, Sort sort, std::string hint);
  static MuType makeApp(MuType datatype, MuType argument);
  static MuType makeArrow(MuType domain, MuType codomain);
  static MuType makeUnion(MuType left, MuType right);
  static MuType makeRec(std::string hint, Sort sort, MuType body);

 private:
  MuTypeNode(TypeKind kind, std::string name, Sort sort, int index, MuType left, MuType right);

  TypeKind kind_;
  std::string name_;
  Sort sort_;
  int index_;
  MuType left_;
  MuType right_;
  std::size_t hash_;
  int size_;
  int loose_;
};

namespace mu {

inline MuType constant(std::string name) { return MuTypeNode::makeConst(std::move(name)); }
inline MuType app(MuType d, MuType a) { return MuTypeNode::makeApp(std::move(d), std::move(a)); }
inline MuType arrow(MuType a, MuType b) { return MuTypeNode::makeArrow(std::move(a), std::move(b)); }
inline MuType join(MuType a, MuType b) { return MuTypeNode::makeUnion(std::move(a), std::move(b)); }

/// Left-associated union of a nonempty list.
MuType joinAll(const std::vector<MuType>& components);

/// μ-binder over a body that mentions the bound variable by `name` as a free
/// variable; the name is abstracted into a de Bruijn index.
MuType rec(const std::string& name, Sort sort, const MuType& bodyWithFreeName);

/// Free (rigid) variable.
inline MuType var(std::string name, Sort sort) {
  return MuTypeNode::makeFreeVar(std::move(name), sort);
}

}  // namespace mu

bool structurallyEqual(const MuType& a, const MuType& b);

struct MuTypeHash {
  std::size_t operator()(const MuType& t) const { return t->hash(); }
};
struct MuTypeEqual {
  bool operator()(const MuType& a, const MuType& b) const { return structurallyEqual(a, b); }
};

struct MuTypePair {
  MuType first;
  MuType second;
};
struct MuTypePairHash {
  std::size_t operator()(const MuTypePair& p) const {
    return p.first->hash() * 0x9e3779b97f4a7c15ULL ^ (p.second->hash() + 0x632be59bd9b4e019ULL);
  }
};
struct MuTypePairEqual {
  bool operator()(const MuTypePair& a, const MuTypePair& b) const {
    return structurallyEqual(a.first, b.first) && structurallyEqual(a.second, b.second);
  }
};

/// Replaces the variable bound by the outermost binder of `body` (index 0)
/// with `replacement`.
MuType instantiate(const MuType& body, const MuType& replacement);

/// One e-fold step on a `Rec` node; identity on anything else.
MuType unfoldOnce(const MuType& t);

/// Unfolds head μ-binders until the head constructor is not μ.
MuType headUnfold(const MuType& t);

/// Components A1..An, each with non-⊕ non-μ head, such that ⊕Ai ≡ A.
/// Left-to-right order is preserved and duplicates are kept.
std::vector<MuType> maximalUnionDecompose(const MuType& t);

/// Sort read off the syntax of a well-sorted type.
Sort sortOf(const MuType& t);

bool isClosed(const MuType& t);

/// True iff every μ-bound variable occurs only beneath `@` or `->`.
bool isContractive(const MuType& t);

std::set<std::string> freeTypeVariables(const MuType& t);

// Symbols reported by lookupAdmitted besides atom names.
inline constexpr std::string_view kAppSymbol = "@";
inline constexpr std::string_view kArrowSymbol = "->";

using SymbolSet = std::set<std::string, std::less<>>;

/// Head symbols the type exhibits at `pos`, union-distributed and μ-unfolded.
SymbolSet lookupAdmitted(const MuType& t, const Position& pos);

// Reserved atom marking the truncation frontier.
inline constexpr std::string_view kBulletName = "Bullet";

enum class TreeKind { Atom, Bullet, Node };
enum class TreeLabel { App, Arrow, Union };

class FiniteTreeNode;
using FiniteTree = const FiniteTreeNode*;

/// Hash-consed finite tree; nodes are owned by a TreeFactory and compared by
/// pointer.
class FiniteTreeNode {
 public:
  TreeKind kind;
  TreeLabel label = TreeLabel::App;
  std::string name;
  FiniteTree left = nullptr;
  FiniteTree right = nullptr;
};

class TreeFactory {
 public:
  TreeFactory();
  TreeFactory(const TreeFactory&) = delete;
  TreeFactory& operator=(const TreeFactory&) = delete;

  FiniteTree bullet() const { return bullet_; }
  FiniteTree atom(const std::string& name);
  FiniteTree node(TreeLabel label, FiniteTree left, FiniteTree right);

  /// Depth-k truncation of the infinite-tree reading of `t`.
  FiniteTree truncate(const MuType& t, int depth);

 private:
  struct Key {
    TreeKind kind;
    TreeLabel label;
    std::string name;
    FiniteTree left;
    FiniteTree right;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  struct TruncKey {
    MuType type;
    int depth;
  };
  struct TruncKeyHash {
    std::size_t operator()(const TruncKey& k) const { return k.type->hash() * 131 + k.depth; }
  };
  struct TruncKeyEqual {
    bool operator()(const TruncKey& a, const TruncKey& b) const {
      return a.depth == b.depth && structurallyEqual(a.type, b.type);
    }
  };

  FiniteTree intern(Key key);

  std::vector<std::unique_ptr<FiniteTreeNode>> storage_;
  std::unordered_map<Key, FiniteTree, KeyHash> table_;
  std::unordered_map<TruncKey, FiniteTree, TruncKeyHash, TruncKeyEqual> truncations_;
  FiniteTree bullet_;
};

std::string toString(FiniteTree tree);

}  // namespace cap
