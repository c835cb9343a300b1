#include "cap/syntax.hpp"

#include <cctype>
#include <functional>
#include <stdexcept>

namespace cap {

Pattern PatternNode::matchable(std::string name, Span span) {
  auto p = std::make_shared<PatternNode>();
  p->kind = PatternKind::Matchable;
  p->name = std::move(name);
  p->span = span;
  return p;
}

Pattern PatternNode::constant(std::string name, Span span) {
  auto p = std::make_shared<PatternNode>();
  p->kind = PatternKind::Constant;
  p->name = std::move(name);
  p->span = span;
  return p;
}

Pattern PatternNode::compound(Pattern left, Pattern right, Span span) {
  auto p = std::make_shared<PatternNode>();
  p->kind = PatternKind::Compound;
  p->left = std::move(left);
  p->right = std::move(right);
  p->span = span;
  return p;
}

Term TermNode::var(std::string name, Span span) {
  auto t = std::make_shared<TermNode>();
  t->kind = TermKind::Var;
  t->name = std::move(name);
  t->span = span;
  return t;
}

Term TermNode::constant(std::string name, Span span) {
  auto t = std::make_shared<TermNode>();
  t->kind = TermKind::Constant;
  t->name = std::move(name);
  t->span = span;
  return t;
}

Term TermNode::app(Term fun, Term arg, Span span) {
  auto t = std::make_shared<TermNode>();
  t->kind = TermKind::App;
  t->fun = std::move(fun);
  t->arg = std::move(arg);
  t->span = span;
  return t;
}

Term TermNode::abs(std::vector<Branch> branches, Span span) {
  if (branches.empty()) throw std::invalid_argument("abstraction needs at least one branch");
  auto t = std::make_shared<TermNode>();
  t->kind = TermKind::Abs;
  t->branches = std::move(branches);
  t->span = span;
  return t;
}

Term syn::apps(Term f, std::initializer_list<Term> args) {
  for (const auto& a : args) f = app(f, a);
  return f;
}

namespace {

void collectMatchables(const Pattern& p, std::vector<std::string>& out) {
  switch (p->kind) {
    case PatternKind::Matchable:
      out.push_back(p->name);
      return;
    case PatternKind::Constant:
      return;
    case PatternKind::Compound:
      collectMatchables(p->left, out);
      collectMatchables(p->right, out);
      return;
  }
}

void collectFreeVars(const Term& t, std::set<std::string>& out) {
  switch (t->kind) {
    case TermKind::Var:
      out.insert(t->name);
      return;
    case TermKind::Constant:
      return;
    case TermKind::App:
      collectFreeVars(t->fun, out);
      collectFreeVars(t->arg, out);
      return;
    case TermKind::Abs:
      for (const auto& b : t->branches) {
        std::set<std::string> inner;
        collectFreeVars(b.body, inner);
        for (const auto& x : freeMatchables(b.pattern)) inner.erase(x);
        out.insert(inner.begin(), inner.end());
      }
      return;
  }
}

}  // namespace

std::set<std::string> freeMatchables(const Pattern& p) {
  std::vector<std::string> names;
  collectMatchables(p, names);
  return {names.begin(), names.end()};
}

std::set<std::string> freeVariables(const Term& t) {
  std::set<std::string> out;
  collectFreeVars(t, out);
  return out;
}

bool isLinear(const Pattern& p) {
  std::vector<std::string> names;
  collectMatchables(p, names);
  return std::set<std::string>(names.begin(), names.end()).size() == names.size();
}

std::vector<Position> positions(const Pattern& p) {
  std::vector<Position> out;
  std::function<void(const Pattern&, const Position&)> walk = [&](const Pattern& q, const Position& at) {
    out.push_back(at);
    if (q->kind == PatternKind::Compound) {
      walk(q->left, at.child(1));
      walk(q->right, at.child(2));
    }
  };
  walk(p, Position{});
  return out;
}

std::vector<Position> positions(const Term& t) {
  std::vector<Position> out;
  std::function<void(const Term&, const Position&)> walk = [&](const Term& s, const Position& at) {
    out.push_back(at);
    if (s->kind == TermKind::App) {
      walk(s->fun, at.child(1));
      walk(s->arg, at.child(2));
    }
  };
  walk(t, Position{});
  return out;
}

std::optional<Pattern> subpatternAt(const Pattern& p, const Position& pos) {
  Pattern cur = p;
  for (auto step : pos.steps()) {
    if (cur->kind != PatternKind::Compound) return std::nullopt;
    cur = step == 1 ? cur->left : cur->right;
  }
  return cur;
}

std::optional<Term> subtermAt(const Term& t, const Position& pos) {
  Term cur = t;
  for (auto step : pos.steps()) {
    if (cur->kind != TermKind::App) return std::nullopt;
    cur = step == 1 ? cur->fun : cur->arg;
  }
  return cur;
}

Term patternAsTerm(const Pattern& p) {
  switch (p->kind) {
    case PatternKind::Matchable:
      return TermNode::var(p->name, p->span);
    case PatternKind::Constant:
      return TermNode::constant(p->name, p->span);
    case PatternKind::Compound:
      return TermNode::app(patternAsTerm(p->left), patternAsTerm(p->right), p->span);
  }
  return nullptr;
}

namespace {

Pattern renamePattern(const Pattern& p, const std::map<std::string, std::string>& renaming) {
  switch (p->kind) {
    case PatternKind::Matchable: {
      auto it = renaming.find(p->name);
      return it == renaming.end() ? p : PatternNode::matchable(it->second, p->span);
    }
    case PatternKind::Constant:
      return p;
    case PatternKind::Compound:
      return PatternNode::compound(renamePattern(p->left, renaming), renamePattern(p->right, renaming),
                                   p->span);
  }
  return p;
}

}  // namespace

Term applySubstitution(const Substitution& sigma, const Term& t) {
  if (sigma.empty()) return t;
  switch (t->kind) {
    case TermKind::Var: {
      auto it = sigma.find(t->name);
      return it == sigma.end() ? t : it->second;
    }
    case TermKind::Constant:
      return t;
    case TermKind::App: {
      Term f = applySubstitution(sigma, t->fun);
      Term a = applySubstitution(sigma, t->arg);
      if (f == t->fun && a == t->arg) return t;
      return TermNode::app(f, a, t->span);
    }
    case TermKind::Abs: {
      std::vector<Branch> branches;
      bool changed = false;
      for (const auto& b : t->branches) {
        auto bound = freeMatchables(b.pattern);
        Substitution inner;
        std::set<std::string> bodyFree = freeVariables(b.body);
        for (const auto& [x, u] : sigma)
          if (!bound.count(x) && bodyFree.count(x)) inner.emplace(x, u);
        if (inner.empty()) {
          branches.push_back(b);
          continue;
        }
        // Rename binders that would capture a free variable of the range.
        std::set<std::string> rangeFree;
        for (const auto& [x, u] : inner) {
          auto fv = freeVariables(u);
          rangeFree.insert(fv.begin(), fv.end());
        }
        std::map<std::string, std::string> renaming;
        std::set<std::string> avoid = rangeFree;
        avoid.insert(bodyFree.begin(), bodyFree.end());
        avoid.insert(bound.begin(), bound.end());
        for (const auto& [x, u] : inner) avoid.insert(x);
        for (const auto& x : bound) {
          if (rangeFree.count(x)) {
            std::string fresh = freshName(x, avoid);
            avoid.insert(fresh);
            renaming.emplace(x, fresh);
          }
        }
        Branch nb = b;
        if (!renaming.empty()) {
          nb.pattern = renamePattern(b.pattern, renaming);
          Bindings theta;
          for (const auto& [x, ty] : b.bindings) {
            auto it = renaming.find(x);
            theta.emplace(it == renaming.end() ? x : it->second, ty);
          }
          nb.bindings = std::move(theta);
          for (const auto& [from, to] : renaming) inner.emplace(from, TermNode::var(to));
        }
        nb.body = applySubstitution(inner, b.body);
        branches.push_back(std::move(nb));
        changed = true;
      }
      if (!changed) return t;
      return TermNode::abs(std::move(branches), t->span);
    }
  }
  return t;
}

Pattern applyToPattern(const std::map<std::string, Pattern>& sigma, const Pattern& p) {
  switch (p->kind) {
    case PatternKind::Matchable: {
      auto it = sigma.find(p->name);
      return it == sigma.end() ? p : it->second;
    }
    case PatternKind::Constant:
      return p;
    case PatternKind::Compound:
      return PatternNode::compound(applyToPattern(sigma, p->left), applyToPattern(sigma, p->right),
                                   p->span);
  }
  return p;
}

bool isDataStructure(const Term& t) {
  const TermNode* cur = t.get();
  while (cur->kind == TermKind::App) cur = cur->fun.get();
  return cur->kind == TermKind::Constant;
}

bool isMatchableForm(const Term& t) { return t->kind == TermKind::Abs || isDataStructure(t); }

bool isValue(const Term& t) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Constant:
    case TermKind::Abs:
      return true;
    case TermKind::App:
      return t->fun->kind != TermKind::Abs && isValue(t->fun) && isValue(t->arg);
  }
  return false;
}

TermClass classify(const Term& t) {
  bool v = isValue(t);
  bool m = isMatchableForm(t);
  if (v && m) return TermClass::ValueAndMatchableForm;
  if (v) return TermClass::Value;
  if (m) return TermClass::MatchableForm;
  return TermClass::Neither;
}

bool structurallyEqual(const Pattern& a, const Pattern& b) {
  if (a->kind != b->kind) return false;
  if (a->kind == PatternKind::Compound)
    return structurallyEqual(a->left, b->left) && structurallyEqual(a->right, b->right);
  return a->name == b->name;
}

namespace {

using NameEnv = std::vector<std::pair<std::string, std::string>>;

bool boundPair(const NameEnv& env, const std::string& x, const std::string& y) {
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    if (it->first == x || it->second == y) return it->first == x && it->second == y;
  }
  return x == y;
}

bool alphaPattern(const Pattern& a, const Pattern& b, NameEnv& binders) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case PatternKind::Matchable:
      binders.emplace_back(a->name, b->name);
      return true;
    case PatternKind::Constant:
      return a->name == b->name;
    case PatternKind::Compound:
      return alphaPattern(a->left, b->left, binders) && alphaPattern(a->right, b->right, binders);
  }
  return false;
}

bool alphaTerm(const Term& a, const Term& b, NameEnv& env) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::Var:
      return boundPair(env, a->name, b->name);
    case TermKind::Constant:
      return a->name == b->name;
    case TermKind::App:
      return alphaTerm(a->fun, b->fun, env) && alphaTerm(a->arg, b->arg, env);
    case TermKind::Abs: {
      if (a->branches.size() != b->branches.size()) return false;
      for (std::size_t i = 0; i < a->branches.size(); ++i) {
        const Branch& x = a->branches[i];
        const Branch& y = b->branches[i];
        NameEnv binders;
        if (!alphaPattern(x.pattern, y.pattern, binders)) return false;
        if (x.bindings.size() != y.bindings.size()) return false;
        for (const auto& [name, other] : binders) {
          auto ix = x.bindings.find(name);
          auto iy = y.bindings.find(other);
          if ((ix == x.bindings.end()) != (iy == y.bindings.end())) return false;
          if (ix != x.bindings.end() && !structurallyEqual(ix->second, iy->second)) return false;
        }
        std::size_t mark = env.size();
        env.insert(env.end(), binders.begin(), binders.end());
        bool ok = alphaTerm(x.body, y.body, env);
        env.resize(mark);
        if (!ok) return false;
      }
      return true;
    }
  }
  return false;
}

}  // namespace

bool alphaEquivalent(const Term& a, const Term& b) {
  NameEnv env;
  return alphaTerm(a, b, env);
}

int nodeCount(const Term& t) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Constant:
      return 1;
    case TermKind::App:
      return 1 + nodeCount(t->fun) + nodeCount(t->arg);
    case TermKind::Abs: {
      int n = 1;
      for (const auto& b : t->branches) n += nodeCount(b.body) + static_cast<int>(positions(b.pattern).size());
      return n;
    }
  }
  return 1;
}

std::string freshName(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  std::string stem = base;
  while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
  if (stem.empty()) stem = "v";
  for (int i = 1;; ++i) {
    std::string candidate = stem + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

}  // namespace cap
