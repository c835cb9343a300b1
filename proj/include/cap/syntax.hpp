#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cap/diagnostic.hpp"
#include "cap/position.hpp"
#include "cap/types.hpp"

namespace cap {

enum class PatternKind { Matchable, Constant, Compound };

class PatternNode;
using Pattern = std::shared_ptr<const PatternNode>;

class PatternNode {
 public:
  PatternKind kind;
  std::string name;
  Pattern left;
  Pattern right;
  Span span;

  static Pattern matchable(std::string name, Span span = {});
  static Pattern constant(std::string name, Span span = {});
  static Pattern compound(Pattern left, Pattern right, Span span = {});
};

class TermNode;
using Term = std::shared_ptr<const TermNode>;

using Bindings = std::map<std::string, MuType>;

struct Branch {
  Pattern pattern;
  Bindings bindings;
  Term body;
};

enum class TermKind { Var, Constant, App, Abs };

class TermNode {
 public:
  TermKind kind;
  std::string name;
  Term fun;
  Term arg;
  std::vector<Branch> branches;
  Span span;

  static Term var(std::string name, Span span = {});
  static Term constant(std::string name, Span span = {});
  static Term app(Term fun, Term arg, Span span = {});
  // Throws std::invalid_argument on an empty branch list.
  static Term abs(std::vector<Branch> branches, Span span = {});
};

// Convenience builders used heavily in tests and generators.
namespace syn {
inline Pattern hat(std::string x) { return PatternNode::matchable(std::move(x)); }
inline Pattern pc(std::string c) { return PatternNode::constant(std::move(c)); }
inline Pattern pcomp(Pattern p, Pattern q) { return PatternNode::compound(std::move(p), std::move(q)); }
inline Term v(std::string x) { return TermNode::var(std::move(x)); }
inline Term c(std::string c) { return TermNode::constant(std::move(c)); }
inline Term app(Term f, Term a) { return TermNode::app(std::move(f), std::move(a)); }
Term apps(Term f, std::initializer_list<Term> args);
inline Term abs(std::vector<Branch> branches) { return TermNode::abs(std::move(branches)); }
inline Term lam(Pattern p, Bindings theta, Term body) {
  return TermNode::abs({Branch{std::move(p), std::move(theta), std::move(body)}});
}
}  // namespace syn

using Substitution = std::map<std::string, Term>;

std::set<std::string> freeMatchables(const Pattern& p);
std::set<std::string> freeVariables(const Term& t);

/// Linear: no matchable occurs twice.
bool isLinear(const Pattern& p);

std::vector<Position> positions(const Pattern& p);
std::vector<Position> positions(const Term& t);

/// Subterm at `pos`, or nullopt when pos is not a position of the argument.
std::optional<Pattern> subpatternAt(const Pattern& p, const Position& pos);
std::optional<Term> subtermAt(const Term& t, const Position& pos);

/// Reads a pattern as a term: matchables become variables.
Term patternAsTerm(const Pattern& p);

/// Simultaneous capture-avoiding substitution.
Term applySubstitution(const Substitution& sigma, const Term& t);

/// Pattern instance σp, with matchables in dom(σ) replaced by patterns.
Pattern applyToPattern(const std::map<std::string, Pattern>& sigma, const Pattern& p);

bool isDataStructure(const Term& t);
bool isMatchableForm(const Term& t);
bool isValue(const Term& t);

enum class TermClass { Value, MatchableForm, ValueAndMatchableForm, Neither };
TermClass classify(const Term& t);

bool structurallyEqual(const Pattern& a, const Pattern& b);
/// Structural equality of terms modulo renaming of branch binders; binding
/// annotations are compared up to α-equivalence of types.
bool alphaEquivalent(const Term& a, const Term& b);

int nodeCount(const Term& t);

/// Name not in `avoid`, derived from `base` by appending a numeric suffix.
std::string freshName(const std::string& base, const std::set<std::string>& avoid);

}  // namespace cap
