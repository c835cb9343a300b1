#include "cap/typecheck.hpp"

#include <algorithm>

#include "cap/compatibility.hpp"
#include "cap/relations.hpp"

namespace cap {

bool isDatatypeShaped(const MuType& t) {
  for (const auto& c : maximalUnionDecompose(t)) {
    switch (c->kind()) {
      case TypeKind::Const:
      case TypeKind::App:
        break;
      case TypeKind::Var:
        if (c->sort() != Sort::Datatype) return false;
        break;
      default:
        return false;
    }
  }
  return true;
}

namespace {

[[noreturn]] void typeError(DiagnosticCode code, const std::string& kind, const std::string& message, Span span,
                            std::optional<MuType> expected = std::nullopt,
                            std::optional<MuType> actual = std::nullopt) {
  Diagnostic d = makeDiagnostic(code, kind, message, span);
  if (expected) d.expected = pretty(*expected);
  if (actual) d.actual = pretty(*actual);
  throw DiagnosticError(std::move(d));
}

MuType patternType(const Bindings& theta, const Pattern& p) {
  switch (p->kind) {
    case PatternKind::Matchable: {
      auto it = theta.find(p->name);
      if (it == theta.end())
        typeError(DiagnosticCode::Type, "unbound-matchable", "matchable '" + p->name + "' has no type annotation",
                  p->span);
      return it->second;
    }
    case PatternKind::Constant:
      return mu::constant(p->name);
    case PatternKind::Compound: {
      MuType d = patternType(theta, p->left);
      if (!isDatatypeShaped(d))
        typeError(DiagnosticCode::Sort, "expected-datatype",
                  "the head of a compound pattern must have a datatype, not " + pretty(d), p->left->span);
      return mu::app(d, patternType(theta, p->right));
    }
  }
  return nullptr;
}

// Least upper bound candidate for branch bodies: the first body type that
// bounds all the others, else their union.
MuType joinBodies(const std::vector<MuType>& bodies) {
  for (const auto& candidate : bodies) {
    bool bounds = std::all_of(bodies.begin(), bodies.end(),
                              [&](const MuType& b) { return isSubtype(b, candidate); });
    if (bounds) return candidate;
  }
  return mu::joinAll(bodies);
}

class Inferencer {
 public:
  explicit Inferencer(const CheckOptions& options) : options_(options) {}

  MuType infer(const TypeEnv& gamma, const Term& t) {
    switch (t->kind) {
      case TermKind::Var: {
        auto it = gamma.find(t->name);
        if (it == gamma.end())
          typeError(DiagnosticCode::Type, "unbound-variable", "variable '" + t->name + "' is not in scope", t->span);
        return it->second;
      }
      case TermKind::Constant:
        return mu::constant(t->name);
      case TermKind::App:
        return application(gamma, t);
      case TermKind::Abs:
        return abstraction(gamma, t);
    }
    return nullptr;
  }

 private:
  MuType application(const TypeEnv& gamma, const Term& t) {
    MuType r = infer(gamma, t->fun);
    MuType c = infer(gamma, t->arg);
    if (isDatatypeShaped(r)) return mu::app(r, c);
    auto components = maximalUnionDecompose(r);
    bool allArrows = std::all_of(components.begin(), components.end(),
                                 [](const MuType& a) { return a->kind() == TypeKind::Arrow; });
    if (!allArrows)
      typeError(DiagnosticCode::Type, "not-applicable",
                "the function position has type " + pretty(r) + ", which is neither a datatype nor a function type",
                t->fun->span);
    // Each arrow component must accept the argument; a union of arrows
    // yields the union of the codomains.
    std::vector<MuType> codomains;
    for (const auto& arrow : components) {
      if (!isSubtype(c, arrow->left()))
        typeError(DiagnosticCode::Type, "argument-mismatch",
                  "the argument's type is not a subtype of the function's domain", t->arg->span, arrow->left(), c);
      codomains.push_back(arrow->right());
    }
    return codomains.size() == 1 ? codomains.front() : mu::joinAll(codomains);
  }

  MuType abstraction(const TypeEnv& gamma, const Term& t) {
    std::vector<PatternJudgement> judgements;
    std::vector<MuType> bodies;
    for (const auto& b : t->branches) {
      auto matchables = freeMatchables(b.pattern);
      for (const auto& [x, ty] : b.bindings) {
        if (!matchables.count(x))
          typeError(DiagnosticCode::Type, "binding-domain-mismatch",
                    "'" + x + "' is annotated but does not occur in the pattern", b.pattern->span);
      }
      for (const auto& x : matchables) {
        if (!b.bindings.count(x))
          typeError(DiagnosticCode::Type, "binding-domain-mismatch", "matchable '" + x + "' has no type annotation",
                    b.pattern->span);
      }
      MuType a = patternType(b.bindings, b.pattern);
      TypeEnv inner = gamma;
      for (const auto& [x, ty] : b.bindings) inner[x] = ty;
      bodies.push_back(infer(inner, b.body));
      judgements.push_back(PatternJudgement{b.bindings, b.pattern, a});
    }
    if (auto d = checkCompatibleList(judgements, options_.explain)) throw DiagnosticError(*d);
    std::vector<MuType> domains;
    for (const auto& j : judgements) domains.push_back(j.type);
    return mu::arrow(mu::joinAll(domains), joinBodies(bodies));
  }

  const CheckOptions& options_;
};

template <class T, class F>
Outcome<T> guarded(F&& f) {
  try {
    return f();
  } catch (const DiagnosticError& e) {
    return e.diagnostic();
  }
}

}  // namespace

Outcome<MuType> typePattern(const Bindings& theta, const Pattern& p) {
  return guarded<MuType>([&] { return patternType(theta, p); });
}

Outcome<MuType> inferType(const TypeEnv& gamma, const Term& t, const CheckOptions& options) {
  return guarded<MuType>([&] { return Inferencer(options).infer(gamma, t); });
}

std::optional<Diagnostic> checkType(const TypeEnv& gamma, const Term& t, const MuType& expected,
                                    const CheckOptions& options) {
  auto inferred = inferType(gamma, t, options);
  if (!inferred) return inferred.error();
  if (isSubtype(*inferred, expected)) return std::nullopt;
  Diagnostic d = makeDiagnostic(DiagnosticCode::Type, "subtype-mismatch",
                                "the term's type is not a subtype of the expected type", t->span);
  d.expected = pretty(expected);
  d.actual = pretty(*inferred);
  return d;
}

DeclResult Session::process(const Decl& decl, int index) {
  DeclResult result;
  result.index = index;
  result.kind = decl.kind;
  result.name = decl.name;
  auto finish = [&](std::optional<Diagnostic> d) {
    if (d) {
      d->decl = index;
      if (!d->span.known()) d->span = decl.span;
      result.diagnostic = std::move(d);
    }
    return result;
  };
  switch (decl.kind) {
    case DeclKind::Assume:
      gamma_[decl.name] = decl.type;
      definitions_.erase(decl.name);
      result.type = decl.type;
      return finish(std::nullopt);
    case DeclKind::Def: {
      auto inferred = inferType(gamma_, decl.term, options_.check);
      if (!inferred) return finish(inferred.error());
      result.type = *inferred;
      gamma_[decl.name] = *inferred;
      definitions_[decl.name] = applySubstitution(definitions_, decl.term);
      return finish(std::nullopt);
    }
    case DeclKind::Check: {
      auto inferred = inferType(gamma_, decl.term, options_.check);
      if (!inferred) return finish(inferred.error());
      result.type = *inferred;
      if (isSubtype(*inferred, decl.type)) return finish(std::nullopt);
      Diagnostic d = makeDiagnostic(DiagnosticCode::Type, "subtype-mismatch",
                                    "the term's type is not a subtype of the declared type", decl.term->span);
      d.expected = pretty(decl.type);
      d.actual = pretty(*inferred);
      return finish(std::move(d));
    }
    case DeclKind::Eval: {
      auto inferred = inferType(gamma_, decl.term, options_.check);
      if (!inferred) return finish(inferred.error());
      result.type = *inferred;
      if (!options_.evaluate) return finish(std::nullopt);
      EvalResult run = evaluate(applySubstitution(definitions_, decl.term), options_.fuel, options_.trace);
      std::optional<Diagnostic> d = run.diagnostic;
      result.evaluation = std::move(run);
      return finish(std::move(d));
    }
  }
  return result;
}

std::vector<DeclResult> checkProgram(const Program& program, const ProgramOptions& options) {
  Session session(options);
  std::vector<DeclResult> results;
  for (std::size_t i = 0; i < program.decls.size(); ++i)
    results.push_back(session.process(program.decls[i], static_cast<int>(i)));
  return results;
}

}  // namespace cap
