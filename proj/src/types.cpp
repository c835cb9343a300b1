#include "cap/types.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_set>

namespace cap {

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

MuTypeNode::MuTypeNode(TypeKind kind, std::string name, Sort sort, int index, MuType left,
                       MuType right)
    : kind_(kind),
      name_(std::move(name)),
      sort_(sort),
      index_(index),
      left_(std::move(left)),
      right_(std::move(right)) {
  std::size_t h = static_cast<std::size_t>(kind_) * 0x100000001b3ULL;
  size_ = 1;
  loose_ = 0;
  switch (kind_) {
    case TypeKind::Const:
      h = mix(h, std::hash<std::string>{}(name_));
      break;
    case TypeKind::Var:
      h = mix(h, static_cast<std::size_t>(sort_));
      if (index_ >= 0) {
        h = mix(h, static_cast<std::size_t>(index_) + 7);
        loose_ = index_ + 1;
      } else {
        h = mix(h, std::hash<std::string>{}(name_));
      }
      break;
    case TypeKind::App:
    case TypeKind::Arrow:
    case TypeKind::Union:
      h = mix(mix(h, left_->hash()), right_->hash());
      size_ += left_->size() + right_->size();
      loose_ = std::max(left_->looseBound(), right_->looseBound());
      break;
    case TypeKind::Rec:
      h = mix(mix(h, static_cast<std::size_t>(sort_)), left_->hash());
      size_ += left_->size();
      loose_ = std::max(0, left_->looseBound() - 1);
      break;
  }
  hash_ = h;
}

MuType MuTypeNode::makeConst(std::string name) {
  return MuType(new MuTypeNode(TypeKind::Const, std::move(name), Sort::Datatype, -1, nullptr, nullptr));
}

MuType MuTypeNode::makeFreeVar(std::string name, Sort sort) {
  return MuType(new MuTypeNode(TypeKind::Var, std::move(name), sort, -1, nullptr, nullptr));
}

MuType MuTypeNode::makeBoundVar(int index, Sort sort, std::string hint) {
  if (index < 0) throw std::invalid_argument("bound variable index must be nonnegative");
  return MuType(new MuTypeNode(TypeKind::Var, std::move(hint), sort, index, nullptr, nullptr));
}

MuType MuTypeNode::makeApp(MuType datatype, MuType argument) {
  return MuType(new MuTypeNode(TypeKind::App, "", Sort::Datatype, -1, std::move(datatype),
                               std::move(argument)));
}

MuType MuTypeNode::makeArrow(MuType domain, MuType codomain) {
  return MuType(
      new MuTypeNode(TypeKind::Arrow, "", Sort::Type, -1, std::move(domain), std::move(codomain)));
}

MuType MuTypeNode::makeUnion(MuType left, MuType right) {
  Sort s = (sortOf(left) == Sort::Datatype && sortOf(right) == Sort::Datatype) ? Sort::Datatype
                                                                                : Sort::Type;
  return MuType(new MuTypeNode(TypeKind::Union, "", s, -1, std::move(left), std::move(right)));
}

MuType MuTypeNode::makeRec(std::string hint, Sort sort, MuType body) {
  return MuType(new MuTypeNode(TypeKind::Rec, std::move(hint), sort, -1, std::move(body), nullptr));
}

namespace mu {

MuType joinAll(const std::vector<MuType>& components) {
  if (components.empty()) throw std::invalid_argument("joinAll of an empty list");
  MuType acc = components.front();
  for (std::size_t i = 1; i < components.size(); ++i) acc = join(acc, components[i]);
  return acc;
}

namespace {

MuType abstractName(const MuType& t, const std::string& name, Sort sort, int depth) {
  switch (t->kind()) {
    case TypeKind::Const:
      return t;
    case TypeKind::Var:
      if (!t->isBound() && t->name() == name) return MuTypeNode::makeBoundVar(depth, sort, name);
      return t;
    case TypeKind::App:
      return app(abstractName(t->left(), name, sort, depth), abstractName(t->right(), name, sort, depth));
    case TypeKind::Arrow:
      return arrow(abstractName(t->left(), name, sort, depth),
                   abstractName(t->right(), name, sort, depth));
    case TypeKind::Union:
      return join(abstractName(t->left(), name, sort, depth), abstractName(t->right(), name, sort, depth));
    case TypeKind::Rec:
      return MuTypeNode::makeRec(t->name(), t->sort(), abstractName(t->body(), name, sort, depth + 1));
  }
  return t;
}

}  // namespace

MuType rec(const std::string& name, Sort sort, const MuType& bodyWithFreeName) {
  return MuTypeNode::makeRec(name, sort, abstractName(bodyWithFreeName, name, sort, 0));
}

}  // namespace mu

bool structurallyEqual(const MuType& a, const MuType& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->hash() != b->hash() || a->kind() != b->kind() || a->size() != b->size()) return false;
  switch (a->kind()) {
    case TypeKind::Const:
      return a->name() == b->name();
    case TypeKind::Var:
      if (a->sort() != b->sort() || a->index() != b->index()) return false;
      return a->isBound() || a->name() == b->name();
    case TypeKind::App:
    case TypeKind::Arrow:
    case TypeKind::Union:
      return structurallyEqual(a->left(), b->left()) && structurallyEqual(a->right(), b->right());
    case TypeKind::Rec:
      return a->sort() == b->sort() && structurallyEqual(a->body(), b->body());
  }
  return false;
}

namespace {

// Adds `amount` to every bound index >= cutoff.
MuType shift(const MuType& t, int amount, int cutoff) {
  if (amount == 0 || t->looseBound() <= cutoff) return t;
  switch (t->kind()) {
    case TypeKind::Const:
      return t;
    case TypeKind::Var:
      return MuTypeNode::makeBoundVar(t->index() + amount, t->sort(), t->name());
    case TypeKind::App:
      return mu::app(shift(t->left(), amount, cutoff), shift(t->right(), amount, cutoff));
    case TypeKind::Arrow:
      return mu::arrow(shift(t->left(), amount, cutoff), shift(t->right(), amount, cutoff));
    case TypeKind::Union:
      return mu::join(shift(t->left(), amount, cutoff), shift(t->right(), amount, cutoff));
    case TypeKind::Rec:
      return MuTypeNode::makeRec(t->name(), t->sort(), shift(t->body(), amount, cutoff + 1));
  }
  return t;
}

MuType substituteIndex(const MuType& t, const MuType& replacement, int depth) {
  if (t->looseBound() <= depth) return t;
  switch (t->kind()) {
    case TypeKind::Const:
      return t;
    case TypeKind::Var:
      if (t->index() == depth) return shift(replacement, depth, 0);
      if (t->index() > depth) return MuTypeNode::makeBoundVar(t->index() - 1, t->sort(), t->name());
      return t;
    case TypeKind::App:
      return mu::app(substituteIndex(t->left(), replacement, depth),
                     substituteIndex(t->right(), replacement, depth));
    case TypeKind::Arrow:
      return mu::arrow(substituteIndex(t->left(), replacement, depth),
                       substituteIndex(t->right(), replacement, depth));
    case TypeKind::Union:
      return mu::join(substituteIndex(t->left(), replacement, depth),
                      substituteIndex(t->right(), replacement, depth));
    case TypeKind::Rec:
      return MuTypeNode::makeRec(t->name(), t->sort(),
                                 substituteIndex(t->body(), replacement, depth + 1));
  }
  return t;
}

}  // namespace

MuType instantiate(const MuType& body, const MuType& replacement) {
  return substituteIndex(body, replacement, 0);
}

MuType unfoldOnce(const MuType& t) {
  if (t->kind() != TypeKind::Rec) return t;
  return instantiate(t->body(), t);
}

MuType headUnfold(const MuType& t) {
  MuType cur = t;
  // Contractiveness bounds this by the number of head binders.
  int guard = 0;
  while (cur->kind() == TypeKind::Rec) {
    cur = unfoldOnce(cur);
    if (++guard > 100000) throw std::logic_error("headUnfold: non-contractive type");
  }
  return cur;
}

namespace {

void decompose(const MuType& t, std::vector<MuType>& out) {
  MuType h = headUnfold(t);
  if (h->kind() == TypeKind::Union) {
    decompose(h->left(), out);
    decompose(h->right(), out);
  } else {
    out.push_back(h);
  }
}

}  // namespace

std::vector<MuType> maximalUnionDecompose(const MuType& t) {
  std::vector<MuType> out;
  decompose(t, out);
  return out;
}

Sort sortOf(const MuType& t) {
  switch (t->kind()) {
    case TypeKind::Const:
    case TypeKind::App:
      return Sort::Datatype;
    case TypeKind::Arrow:
      return Sort::Type;
    case TypeKind::Var:
    case TypeKind::Union:
    case TypeKind::Rec:
      return t->sort();
  }
  return Sort::Type;
}

namespace {

void collectFree(const MuType& t, std::set<std::string>& out) {
  switch (t->kind()) {
    case TypeKind::Const:
      return;
    case TypeKind::Var:
      if (!t->isBound()) out.insert(t->name());
      return;
    case TypeKind::App:
    case TypeKind::Arrow:
    case TypeKind::Union:
      collectFree(t->left(), out);
      collectFree(t->right(), out);
      return;
    case TypeKind::Rec:
      collectFree(t->body(), out);
      return;
  }
}

bool occursUnguarded(const MuType& t, int index) {
  if (t->looseBound() <= index) return false;
  switch (t->kind()) {
    case TypeKind::Var:
      return t->index() == index;
    case TypeKind::Union:
      return occursUnguarded(t->left(), index) || occursUnguarded(t->right(), index);
    case TypeKind::Rec:
      return occursUnguarded(t->body(), index + 1);
    default:
      return false;
  }
}

}  // namespace

std::set<std::string> freeTypeVariables(const MuType& t) {
  std::set<std::string> out;
  collectFree(t, out);
  return out;
}

bool isClosed(const MuType& t) { return t->looseBound() == 0 && freeTypeVariables(t).empty(); }

bool isContractive(const MuType& t) {
  switch (t->kind()) {
    case TypeKind::Const:
    case TypeKind::Var:
      return true;
    case TypeKind::App:
    case TypeKind::Arrow:
    case TypeKind::Union:
      return isContractive(t->left()) && isContractive(t->right());
    case TypeKind::Rec:
      return !occursUnguarded(t->body(), 0) && isContractive(t->body());
  }
  return true;
}

namespace {

struct LookupKey {
  MuType type;
  std::size_t offset;
};
struct LookupKeyHash {
  std::size_t operator()(const LookupKey& k) const { return k.type->hash() * 31 + k.offset; }
};
struct LookupKeyEqual {
  bool operator()(const LookupKey& a, const LookupKey& b) const {
    return a.offset == b.offset && structurallyEqual(a.type, b.type);
  }
};

using LookupVisited = std::unordered_set<LookupKey, LookupKeyHash, LookupKeyEqual>;

void lookupInto(const MuType& t, const Position& pos, std::size_t offset, SymbolSet& out,
                LookupVisited& visited) {
  const bool atEnd = offset == pos.length();
  switch (t->kind()) {
    case TypeKind::Const:
    case TypeKind::Var:
      if (atEnd) out.insert(t->name());
      return;
    case TypeKind::App:
    case TypeKind::Arrow:
      if (atEnd) {
        out.insert(std::string(t->kind() == TypeKind::App ? kAppSymbol : kArrowSymbol));
        return;
      }
      lookupInto(pos[offset] == 1 ? t->left() : t->right(), pos, offset + 1, out, visited);
      return;
    case TypeKind::Union:
    case TypeKind::Rec:
      // Unions and binders do not consume position steps; the visited set
      // stops a cycle through them, which contractiveness rules out.
      if (!visited.insert(LookupKey{t, offset}).second) return;
      if (t->kind() == TypeKind::Union) {
        lookupInto(t->left(), pos, offset, out, visited);
        lookupInto(t->right(), pos, offset, out, visited);
      } else {
        lookupInto(unfoldOnce(t), pos, offset, out, visited);
      }
      return;
  }
}

}  // namespace

SymbolSet lookupAdmitted(const MuType& t, const Position& pos) {
  SymbolSet out;
  LookupVisited visited;
  lookupInto(t, pos, 0, out, visited);
  return out;
}

std::size_t TreeFactory::KeyHash::operator()(const Key& k) const {
  std::size_t h = static_cast<std::size_t>(k.kind) * 3 + static_cast<std::size_t>(k.label);
  h = mix(h, std::hash<std::string>{}(k.name));
  h = mix(h, std::hash<const void*>{}(k.left));
  h = mix(h, std::hash<const void*>{}(k.right));
  return h;
}

TreeFactory::TreeFactory() {
  bullet_ = intern(Key{TreeKind::Bullet, TreeLabel::App, std::string(kBulletName), nullptr, nullptr});
}

FiniteTree TreeFactory::intern(Key key) {
  auto it = table_.find(key);
  if (it != table_.end()) return it->second;
  auto node = std::make_unique<FiniteTreeNode>();
  node->kind = key.kind;
  node->label = key.label;
  node->name = key.name;
  node->left = key.left;
  node->right = key.right;
  FiniteTree ptr = node.get();
  storage_.push_back(std::move(node));
  table_.emplace(std::move(key), ptr);
  return ptr;
}

FiniteTree TreeFactory::atom(const std::string& name) {
  return intern(Key{TreeKind::Atom, TreeLabel::App, name, nullptr, nullptr});
}

FiniteTree TreeFactory::node(TreeLabel label, FiniteTree left, FiniteTree right) {
  return intern(Key{TreeKind::Node, label, "", left, right});
}

FiniteTree TreeFactory::truncate(const MuType& t, int depth) {
  if (depth <= 0) return bullet_;
  TruncKey key{t, depth};
  if (auto it = truncations_.find(key); it != truncations_.end()) return it->second;
  FiniteTree result = nullptr;
  switch (t->kind()) {
    case TypeKind::Const:
      result = atom(t->name());
      break;
    case TypeKind::Var:
      if (t->isBound()) throw std::logic_error("truncate: type has an escaping bound variable");
      result = atom(t->name());
      break;
    case TypeKind::App:
      result = node(TreeLabel::App, truncate(t->left(), depth - 1), truncate(t->right(), depth - 1));
      break;
    case TypeKind::Arrow:
      result =
          node(TreeLabel::Arrow, truncate(t->left(), depth - 1), truncate(t->right(), depth - 1));
      break;
    case TypeKind::Union:
      result = node(TreeLabel::Union, truncate(t->left(), depth), truncate(t->right(), depth));
      break;
    case TypeKind::Rec:
      result = truncate(unfoldOnce(t), depth);
      break;
  }
  truncations_.emplace(std::move(key), result);
  return result;
}

std::string toString(FiniteTree tree) {
  switch (tree->kind) {
    case TreeKind::Bullet:
      return "•";
    case TreeKind::Atom:
      return tree->name;
    case TreeKind::Node: {
      const char* op = tree->label == TreeLabel::App ? " @ " : tree->label == TreeLabel::Arrow ? " -> " : " + ";
      return "(" + toString(tree->left) + op + toString(tree->right) + ")";
    }
  }
  return "?";
}

}  // namespace cap
