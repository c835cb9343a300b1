#include "cap/conformance.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "cap/compatibility.hpp"

namespace cap {

namespace {

const std::vector<std::string> kConstants = {"Nat", "True", "False", "Nil", "Cons", "Vl"};

constexpr int kMaxExamples = 5;
constexpr int kInhabitantDepth = 6;

RawType raw(RawTypeKind kind, std::string name, RawType left = nullptr, RawType right = nullptr) {
  return std::make_shared<const RawTypeNode>(RawTypeNode{kind, std::move(name), std::move(left), std::move(right), {}});
}

bool mentions(const RawType& t, const std::string& name) {
  if (!t) return false;
  if (t->kind == RawTypeKind::Var && t->name == name) return true;
  if (t->kind == RawTypeKind::Rec && t->name == name) return false;
  return mentions(t->left, name) || mentions(t->right, name);
}

int rawSize(const RawType& t) {
  if (!t) return 0;
  return 1 + rawSize(t->left) + rawSize(t->right);
}

}  // namespace

void GenConfig::validate() const {
  if (maxTypeNodes < 1 || maxTermNodes < 1 || maxUnionWidth < 1)
    throw std::invalid_argument("generator bounds must be positive");
  if (recProbability < 0 || recProbability > 1) throw std::invalid_argument("recProbability must lie in [0, 1]");
}

Generator::Generator(GenConfig config) : config_(config), rng_(config.seed) { config_.validate(); }

bool Generator::chance(double p) { return std::bernoulli_distribution(p)(rng_); }

int Generator::uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

std::string Generator::constant() { return kConstants[static_cast<std::size_t>(uniform(0, kConstants.size() - 1))]; }

std::string Generator::freshMatchable() { return "x" + std::to_string(counter_++); }

RawType Generator::rawGen(int budget, bool datatype, std::vector<ScopeEntry>& scope, bool allowUnion) {
  auto leaf = [&]() -> RawType {
    std::vector<const ScopeEntry*> usable;
    for (const auto& e : scope)
      if (e.guarded && (e.datatype || !datatype)) usable.push_back(&e);
    if (!usable.empty() && chance(0.6))
      return raw(RawTypeKind::Var, usable[static_cast<std::size_t>(uniform(0, usable.size() - 1))]->name);
    return raw(RawTypeKind::Name, constant());
  };
  if (budget <= 1) return leaf();

  enum Choice { Leaf, App, Arrow, Union, Rec };
  std::vector<std::pair<Choice, double>> options = {{Leaf, 1.0}};
  if (budget >= 3) {
    options.push_back({App, 3.0});
    if (!datatype) options.push_back({Arrow, 2.0});
    if (allowUnion && config_.maxUnionWidth >= 2) options.push_back({Union, 2.5});
  }
  if (budget >= 4 && config_.recProbability > 0) options.push_back({Rec, 6.0 * config_.recProbability});
  std::vector<double> weights;
  for (const auto& [c, w] : options) weights.push_back(w);
  Choice choice = options[std::discrete_distribution<std::size_t>(weights.begin(), weights.end())(rng_)].first;

  auto guardAll = [&]() {
    std::vector<bool> saved;
    for (auto& e : scope) {
      saved.push_back(e.guarded);
      e.guarded = true;
    }
    return saved;
  };
  auto restore = [&](const std::vector<bool>& saved) {
    for (std::size_t i = 0; i < saved.size(); ++i) scope[i].guarded = saved[i];
  };

  switch (choice) {
    case Leaf:
      return leaf();
    case App:
    case Arrow: {
      int left = uniform(1, budget - 2);
      int right = budget - 1 - left;
      auto saved = guardAll();
      RawType l = rawGen(left, choice == App, scope, true);
      RawType r = rawGen(right, false, scope, true);
      restore(saved);
      return raw(choice == App ? RawTypeKind::App : RawTypeKind::Arrow, "", l, r);
    }
    case Union: {
      int width = std::min(uniform(2, config_.maxUnionWidth), (budget - 1 + 1) / 2 + 1);
      width = std::max(2, std::min(width, budget - (width - 1)));
      int remaining = budget - (width - 1);
      RawType acc;
      for (int i = 0; i < width; ++i) {
        int share = i + 1 == width ? remaining : uniform(1, std::max(1, remaining - (width - 1 - i)));
        remaining -= share;
        RawType part = rawGen(share, datatype, scope, false);
        acc = acc ? raw(RawTypeKind::Union, "", acc, part) : part;
      }
      return acc;
    }
    case Rec: {
      std::string name = "a" + std::to_string(counter_++);
      bool varDatatype = datatype || chance(0.6);
      scope.push_back({name, varDatatype, false});
      RawType body = rawGen(budget - 1, varDatatype, scope, true);
      scope.pop_back();
      // Vacuous binders are legal but rarely interesting.
      if (!mentions(body, name) && chance(0.85)) return body;
      return raw(RawTypeKind::Rec, name, body);
    }
  }
  return leaf();
}

RawType Generator::rawType(int maxNodes, bool datatype) {
  std::vector<ScopeEntry> scope;
  return rawGen(uniform(1, std::max(1, maxNodes)), datatype, scope, true);
}

MuType Generator::type(int maxNodes, bool datatype) {
  RawType r = rawType(maxNodes, datatype);
  auto valid = validateType(r);
  if (!valid) throw std::logic_error("generated an invalid type: " + valid.error().message);
  return *valid;
}

MuType Generator::widen(const MuType& t, int depth) {
  const bool datatype = sortOf(t) == Sort::Datatype;
  int roll = uniform(0, depth > 2 ? 1 : 4);
  switch (roll) {
    case 0:
      return t;
    case 1:
      return chance(0.5) ? mu::join(t, type(3, datatype)) : mu::join(type(3, datatype), t);
    default: {
      MuType h = headUnfold(t);
      if (h->kind() == TypeKind::App) return mu::app(widen(h->left(), depth + 1), widen(h->right(), depth + 1));
      if (h->kind() == TypeKind::Arrow)
        return mu::arrow(narrow(h->left(), depth + 1), widen(h->right(), depth + 1));
      if (h->kind() == TypeKind::Union) {
        return chance(0.5) ? mu::join(widen(h->left(), depth + 1), widen(h->right(), depth + 1))
                           : mu::join(h->right(), h->left());
      }
      return mu::join(t, type(2, datatype));
    }
  }
}

MuType Generator::narrow(const MuType& t, int depth) {
  auto comps = maximalUnionDecompose(t);
  MuType c = comps[static_cast<std::size_t>(uniform(0, comps.size() - 1))];
  if (depth > 2 || chance(0.4)) return c;
  if (c->kind() == TypeKind::App) return mu::app(narrow(c->left(), depth + 1), narrow(c->right(), depth + 1));
  if (c->kind() == TypeKind::Arrow) return mu::arrow(widen(c->left(), depth + 1), narrow(c->right(), depth + 1));
  return c;
}

RawType Generator::mutate(const RawType& r) {
  int target = uniform(0, rawSize(r) - 1);
  int index = 0;
  std::function<RawType(const RawType&)> go = [&](const RawType& t) -> RawType {
    if (!t) return t;
    if (index++ == target) {
      switch (uniform(0, 3)) {
        case 0:
          return raw(RawTypeKind::Union, "", t, raw(RawTypeKind::Name, constant()));
        case 1:
          if (t->kind == RawTypeKind::Union) return chance(0.5) ? t->left : t->right;
          return raw(RawTypeKind::Name, constant());
        case 2:
          if (t->kind == RawTypeKind::Union) return raw(RawTypeKind::Union, "", t->right, t->left);
          if (t->kind == RawTypeKind::Name) return raw(RawTypeKind::Name, constant());
          return t;
        default: {
          std::vector<ScopeEntry> scope;
          return rawGen(uniform(1, 3), false, scope, true);
        }
      }
    }
    RawType l = go(t->left);
    RawType rr = go(t->right);
    if (l == t->left && rr == t->right) return t;
    return std::make_shared<const RawTypeNode>(RawTypeNode{t->kind, t->name, l, rr, t->span});
  };
  return go(r);
}

Pattern Generator::patternGen(int budget, bool datatype, Bindings& theta) {
  if (budget >= 3 && chance(0.55)) {
    int left = uniform(1, budget - 2);
    Pattern l = patternGen(left, true, theta);
    Pattern r = patternGen(budget - 1 - left, false, theta);
    return PatternNode::compound(l, r);
  }
  if (chance(0.5)) {
    std::string x = freshMatchable();
    theta[x] = type(std::min(config_.maxTypeNodes, 6), datatype);
    return PatternNode::matchable(x);
  }
  return PatternNode::constant(constant());
}

TypedPattern Generator::pattern(int maxNodes) {
  Bindings theta;
  Pattern p = patternGen(uniform(1, std::max(1, maxNodes)), false, theta);
  auto ty = typePattern(theta, p);
  if (!ty) throw std::logic_error("generated an ill-typed pattern: " + ty.error().message);
  return {p, theta, *ty};
}

std::optional<Term> Generator::inhabitant(const MuType& t, bool allowRedexes, int depth) {
  if (depth > kInhabitantDepth) return std::nullopt;
  auto comps = maximalUnionDecompose(t);
  std::vector<MuType> order = comps;
  std::shuffle(order.begin(), order.end(), rng_);
  if (depth >= kInhabitantDepth / 2) {
    std::stable_partition(order.begin(), order.end(), [](const MuType& c) { return c->kind() == TypeKind::Const; });
  }
  for (const auto& c : order) {
    std::optional<Term> result;
    switch (c->kind()) {
      case TypeKind::Const:
        result = TermNode::constant(c->name());
        break;
      case TypeKind::App: {
        auto d = inhabitant(c->left(), false, depth + 1);
        if (!d) break;
        auto a = inhabitant(c->right(), allowRedexes, depth + 1);
        if (!a) break;
        result = TermNode::app(*d, *a);
        break;
      }
      case TypeKind::Arrow: {
        MuType dom = c->left();
        auto domComps = maximalUnionDecompose(dom);
        bool allConst = std::all_of(domComps.begin(), domComps.end(),
                                    [](const MuType& x) { return x->kind() == TypeKind::Const; });
        if (allConst && chance(0.5)) {
          std::vector<Branch> branches;
          for (const auto& k : domComps) {
            auto body = inhabitant(c->right(), allowRedexes, depth + 1);
            if (!body) break;
            branches.push_back(Branch{PatternNode::constant(k->name()), {}, *body});
          }
          if (branches.size() == domComps.size()) result = TermNode::abs(std::move(branches));
          break;
        }
        std::string x = freshMatchable();
        Term body;
        if (isSubtype(dom, c->right()) && chance(0.5)) {
          body = TermNode::var(x);
        } else {
          auto b = inhabitant(c->right(), allowRedexes, depth + 1);
          if (!b) break;
          body = *b;
        }
        result = TermNode::abs({Branch{PatternNode::matchable(x), {{x, dom}}, body}});
        break;
      }
      default:
        break;
    }
    if (!result) continue;
    if (allowRedexes && chance(0.15)) {
      std::string y = freshMatchable();
      Term identity = TermNode::abs({Branch{PatternNode::matchable(y), {{y, c}}, TermNode::var(y)}});
      result = TermNode::app(identity, *result);
    }
    return result;
  }
  return std::nullopt;
}

std::optional<Term> Generator::dataHead(int budget, const TypeEnv& gamma) {
  std::vector<std::string> datatypeVars;
  for (const auto& [x, ty] : gamma)
    if (isDatatypeShaped(ty)) datatypeVars.push_back(x);
  if (!datatypeVars.empty() && chance(0.3))
    return TermNode::var(datatypeVars[static_cast<std::size_t>(uniform(0, datatypeVars.size() - 1))]);
  if (budget >= 3 && chance(0.4)) {
    int left = uniform(1, budget - 2);
    auto head = dataHead(left, gamma);
    auto arg = term(budget - 1 - left, gamma);
    if (head && arg) return TermNode::app(*head, *arg);
  }
  return TermNode::constant(constant());
}

std::optional<Term> Generator::abstraction(int budget, const TypeEnv& gamma) {
  int branchCount = uniform(1, std::min(3, std::max(1, budget / 3)));
  int share = std::max(2, budget / branchCount);
  std::vector<Branch> branches;
  std::vector<PatternJudgement> judgements;
  for (int i = 0; i < branchCount; ++i) {
    Bindings theta;
    int patBudget = uniform(1, std::max(1, share / 2));
    Pattern p = patternGen(patBudget, false, theta);
    auto pty = typePattern(theta, p);
    if (!pty) continue;
    TypeEnv inner = gamma;
    for (const auto& [x, ty] : theta) inner[x] = ty;
    auto body = term(std::max(1, share - patBudget - 1), inner);
    if (!body || !inferType(inner, *body)) continue;
    judgements.push_back({theta, p, *pty});
    if (checkCompatibleList(judgements)) {
      judgements.pop_back();
      continue;
    }
    branches.push_back(Branch{p, theta, *body});
  }
  if (branches.empty()) return std::nullopt;
  return TermNode::abs(std::move(branches));
}

std::optional<Term> Generator::term(int budget, const TypeEnv& gamma) {
  auto leaf = [&]() -> Term {
    if (!gamma.empty() && chance(0.5)) {
      auto it = gamma.begin();
      std::advance(it, uniform(0, gamma.size() - 1));
      return TermNode::var(it->first);
    }
    return TermNode::constant(constant());
  };
  if (budget <= 2) return leaf();
  switch (std::discrete_distribution<int>({1.0, 2.0, 2.0, 4.5})(rng_)) {
    case 0:
      return leaf();
    case 1: {
      int left = uniform(1, budget - 2);
      auto head = dataHead(left, gamma);
      auto arg = term(budget - 1 - left, gamma);
      if (!head || !arg) return std::nullopt;
      return TermNode::app(*head, *arg);
    }
    case 2:
      return abstraction(budget, gamma);
    default: {
      std::vector<std::string> arrowVars;
      for (const auto& [x, ty] : gamma)
        if (headUnfold(ty)->kind() == TypeKind::Arrow) arrowVars.push_back(x);
      Term fun;
      MuType funType;
      const int pick = uniform(0, 3);
      if (!arrowVars.empty() && pick == 0) {
        std::string f = arrowVars[static_cast<std::size_t>(uniform(0, arrowVars.size() - 1))];
        fun = TermNode::var(f);
        funType = gamma.at(f);
      } else if (pick == 1) {
        // Any term of function type, e.g. a partial application.
        auto f = term(std::max(3, budget * 2 / 3), gamma);
        if (!f) return std::nullopt;
        auto ty = inferType(gamma, *f);
        if (!ty || headUnfold(*ty)->kind() != TypeKind::Arrow) return std::nullopt;
        fun = *f;
        funType = *ty;
      } else {
        auto abs = abstraction(std::max(3, budget * 2 / 3), gamma);
        if (!abs) return std::nullopt;
        auto ty = inferType(gamma, *abs);
        if (!ty) return std::nullopt;
        fun = *abs;
        funType = *ty;
      }
      MuType dom = headUnfold(funType)->left();
      std::optional<Term> arg;
      if (chance(0.3)) {
        std::vector<std::string> fits;
        for (const auto& [x, ty] : gamma)
          if (isSubtype(ty, dom)) fits.push_back(x);
        if (!fits.empty()) arg = TermNode::var(fits[static_cast<std::size_t>(uniform(0, fits.size() - 1))]);
      }
      // Prefer a generated argument, which may itself reduce.
      for (int tries = 0; !arg && tries < 3 && chance(0.6); ++tries) {
        auto candidate = term(std::max(1, budget / 3), gamma);
        if (!candidate) continue;
        auto ty = inferType(gamma, *candidate);
        if (ty && isSubtype(*ty, dom)) arg = candidate;
      }
      if (!arg) arg = inhabitant(dom, true);
      if (!arg) return std::nullopt;
      return TermNode::app(fun, *arg);
    }
  }
}

TypedTerm Generator::typedTerm(int maxNodes) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    int budget = uniform(std::max(1, maxNodes / 3), std::max(1, maxNodes));
    auto t = budget <= 1 ? std::optional<Term>(TermNode::constant(constant())) : term(budget, {});
    if (!t) continue;
    auto ty = inferType({}, *t);
    if (!ty) continue;
    return {*t, *ty};
  }
  throw GenerationExhausted("no typed term after 200 attempts");
}

MuType genType(const GenConfig& config) { return Generator(config).type(); }

TypedTerm genTypedTerm(const GenConfig& config) { return Generator(config).typedTerm(); }

std::optional<Counterexample> checkSubjectReduction(const Term& t, const MuType& type, int fuel) {
  Term cur = t;
  for (int step = 1; step <= fuel; ++step) {
    StepResult s = smallStep(cur);
    if (s.kind != StepKind::Reduced) return std::nullopt;
    if (auto d = checkType({}, s.term, type)) {
      std::ostringstream detail;
      detail << "step " << step << " at redex " << s.redex.toString() << ": reduct " << pretty(s.term)
             << " fails to check: " << d->format();
      return Counterexample{"subject-reduction", detail.str(), pretty(t), pretty(type)};
    }
    cur = s.term;
  }
  return std::nullopt;
}

std::optional<Counterexample> checkProgress(const Term& t, int fuel) {
  Term cur = t;
  for (int step = 0; step <= fuel; ++step) {
    StepResult s = smallStep(cur);
    if (s.kind == StepKind::Normal) {
      if (!isValue(cur))
        return Counterexample{"progress", "step " + std::to_string(step) + ": " + pretty(cur) + " is neither a value nor reducible",
                              pretty(t), ""};
      return std::nullopt;
    }
    if (s.kind == StepKind::Stuck)
      return Counterexample{"progress", "step " + std::to_string(step) + ": " + s.stuck->message, pretty(t), ""};
    cur = s.term;
  }
  return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void record(PropertyResult& r, Counterexample c) {
  ++r.failures;
  if (static_cast<int>(r.examples.size()) < kMaxExamples) r.examples.push_back(std::move(c));
}

GenConfig derived(const GenConfig& base, std::uint64_t salt) {
  GenConfig c = base;
  c.seed = base.seed * 0x9e3779b97f4a7c15ULL + salt;
  return c;
}

}  // namespace

double DifferentialSummary::refutedFraction() const {
  return engineFalse == 0 ? 1.0 : static_cast<double>(refutedWithinLimit) / engineFalse;
}

bool DifferentialSummary::passed() const {
  return disagreements == 0 && contradictions == 0 && refutedFraction() >= 0.99;
}

DifferentialSummary runDifferential(const GenConfig& config, int pairs, int kmax) {
  Generator gen(derived(config, 11));
  DifferentialSummary summary;
  summary.pairs = pairs;
  summary.kmax = kmax;
  const int maxNodes = std::min(config.maxTypeNodes, 12);
  for (int i = 0; i < pairs; ++i) {
    MuType a;
    MuType b;
    RawType ra = gen.rawType(maxNodes, false);
    a = *validateType(ra);
    switch (gen.rng()() % 4) {
      case 0:
        b = gen.type(maxNodes);
        break;
      case 1:
        b = a;
        break;
      default: {
        for (int tries = 0; tries < 20 && !b; ++tries) {
          RawType rb = gen.mutate(ra);
          if (auto vb = validateType(rb); vb && (*vb)->size() <= 12) b = *vb;
        }
        if (!b) b = gen.type(maxNodes);
      }
    }
    if (gen.rng()() % 2) std::swap(a, b);
    for (RelMode mode : {RelMode::Sub, RelMode::Eq}) {
      ++summary.comparisons;
      OracleReport report = oracleCompare(a, b, kmax, mode);
      if (report.engine) ++summary.engineTrue;
      else ++summary.engineFalse;
      auto fail = [&](const std::string& what) {
        summary.failures.push_back(
            {std::string("differential-") + toString(mode), what, pretty(a), pretty(b)});
      };
      if (!report.agree) {
        ++summary.disagreements;
        fail("engine true but a truncation disagrees");
        continue;
      }
      if (report.engine) continue;
      if (!report.inconclusive) {
        ++summary.refutedWithinLimit;
        continue;
      }
      ++summary.inconclusive;
      OracleReport deep = oracleCompare(a, b, 2 * kmax, mode, 4 * kmax);
      if (!deep.agree || deep.engine != report.engine) {
        ++summary.contradictions;
        fail("re-verification at doubled depth contradicts the first run");
      } else if (!deep.inconclusive) {
        ++summary.reverifiedRefuted;
      }
    }
  }
  return summary;
}

PropertyResult runSubjectReduction(const SuiteOptions& options) {
  auto start = Clock::now();
  Generator gen(derived(options.gen, 1));
  PropertyResult r{"subject-reduction", 0, 0, 0, {}, 0};
  for (int i = 0; i < options.cases; ++i) {
    TypedTerm tt = gen.typedTerm();
    ++r.cases;
    ++r.checked;
    if (auto c = checkSubjectReduction(tt.term, tt.type, options.fuel)) record(r, *c);
  }
  r.seconds = since(start);
  return r;
}

PropertyResult runProgress(const SuiteOptions& options) {
  auto start = Clock::now();
  Generator gen(derived(options.gen, 2));
  PropertyResult r{"progress", 0, 0, 0, {}, 0};
  for (int i = 0; i < options.cases; ++i) {
    TypedTerm tt = gen.typedTerm();
    ++r.cases;
    ++r.checked;
    if (auto c = checkProgress(tt.term, options.fuel)) record(r, *c);
  }
  r.seconds = since(start);
  return r;
}

PropertyResult runSuccessfulMatch(const SuiteOptions& options) {
  auto start = Clock::now();
  Generator gen(derived(options.gen, 3));
  PropertyResult r{"successful-match", 0, 0, 0, {}, 0};
  for (int i = 0; i < options.cases; ++i) {
    ++r.cases;
    TypedPattern tp = gen.pattern(7);
    auto v = gen.inhabitant(tp.type, false);
    if (!v) continue;
    auto vt = inferType({}, *v);
    if (!vt || !isSubtype(*vt, tp.type) || !isValue(*v)) {
      record(r, {"successful-match", "generated inhabitant does not have the pattern's type", pretty(*v), pretty(tp.type)});
      continue;
    }
    ++r.checked;
    if (!matchPattern(tp.pattern, *v).succeeded())
      record(r, {"successful-match", "pattern " + pretty(tp.pattern) + " does not match", pretty(*v), pretty(tp.type)});
  }
  r.seconds = since(start);
  return r;
}

PropertyResult runConfluence(const SuiteOptions& options) {
  auto start = Clock::now();
  Generator gen(derived(options.gen, 4));
  std::mt19937_64 order(options.gen.seed ^ 0xc0ffeeULL);
  PropertyResult r{"confluence", 0, 0, 0, {}, 0};
  int produced = 0;
  for (int attempt = 0; produced < options.confluenceCases && attempt < options.confluenceCases * 50; ++attempt) {
    TypedTerm tt = gen.typedTerm(12);
    if (nodeCount(tt.term) > 12) continue;
    ++produced;
    ++r.cases;
    NormalizeResult cbv = normalizeCbvThenStrong(tt.term, options.fuel);
    NormalizeResult rnd = normalizeRandom(tt.term, options.fuel, order);
    if (!cbv.terminated || !rnd.terminated) continue;
    ++r.checked;
    if (!alphaEquivalent(cbv.term, rnd.term))
      record(r, {"confluence", "normal forms differ: " + pretty(cbv.term) + " vs " + pretty(rnd.term), pretty(tt.term), ""});
  }
  r.seconds = since(start);
  return r;
}

PropertyResult runCompatibilityLemma(const SuiteOptions& options) {
  auto start = Clock::now();
  Generator gen(derived(options.gen, 5));
  PropertyResult r{"compatibility-lemma", 0, 0, 0, {}, 0};
  for (int i = 0; i < options.cases; ++i) {
    ++r.cases;
    TypedPattern q = gen.pattern(7);
    TypedPattern p = gen.chance(0.5) ? gen.pattern(7) : q;
    auto u = gen.inhabitant(q.type, false);
    if (!u || !matchPattern(p.pattern, *u).succeeded()) continue;
    ++r.checked;
    bool psi = true;
    for (const auto& pi : mismatchPositions(p.pattern, q.pattern)) {
      SymbolSet a = lookupAdmitted(p.type, pi);
      SymbolSet b = lookupAdmitted(q.type, pi);
      if (std::none_of(a.begin(), a.end(), [&](const std::string& s) { return b.count(s) > 0; })) psi = false;
    }
    if (!psi)
      record(r, {"compatibility-lemma", "patterns " + pretty(p.pattern) + " / " + pretty(q.pattern), pretty(*u),
                 pretty(p.type) + " / " + pretty(q.type)});
  }
  r.seconds = since(start);
  return r;
}

PropertyResult runMismatchLemma(const SuiteOptions& options) {
  auto start = Clock::now();
  Generator gen(derived(options.gen, 6));
  PropertyResult r{"mismatch-lemma", 0, 0, 0, {}, 0};
  for (int i = 0; i < options.cases; ++i) {
    ++r.cases;
    TypedPattern p = gen.pattern(7);
    MuType b = gen.chance(0.5) ? gen.type(8) : gen.widen(p.type);
    auto u = gen.inhabitant(b, false);
    if (!u || matchPattern(p.pattern, *u).kind != MatchKind::Fail) continue;
    ++r.checked;
    if (isSubtype(b, p.type))
      record(r, {"mismatch-lemma", "pattern " + pretty(p.pattern) + " fails on an argument whose type is a subtype",
                 pretty(*u), pretty(b) + " <= " + pretty(p.type)});
  }
  r.seconds = since(start);
  return r;
}

std::vector<PropertyResult> runRelationLaws(const SuiteOptions& options) {
  Generator gen(derived(options.gen, 7));
  const int n = options.lawCases;
  std::vector<PropertyResult> out;
  auto law = [&](const std::string& name, auto&& body) {
    auto start = Clock::now();
    PropertyResult r{name, 0, 0, 0, {}, 0};
    for (int i = 0; i < n; ++i) {
      ++r.cases;
      body(r);
    }
    r.seconds = since(start);
    out.push_back(std::move(r));
  };
  auto violation = [](PropertyResult& r, const std::string& what, const MuType& a, const MuType& b) {
    record(r, {r.name, what, pretty(a), pretty(b)});
  };

  law("reflexivity", [&](PropertyResult& r) {
    MuType a = gen.type();
    ++r.checked;
    if (!isSubtype(a, a) || !isEquivalent(a, a)) violation(r, "A is not related to itself", a, a);
  });
  law("widening", [&](PropertyResult& r) {
    MuType a = gen.type();
    MuType b = gen.widen(a);
    MuType c = gen.narrow(a);
    ++r.checked;
    if (!isSubtype(a, b)) violation(r, "A is not below a widening of A", a, b);
    if (!isSubtype(c, a)) violation(r, "a narrowing of A is not below A", c, a);
  });
  law("transitivity", [&](PropertyResult& r) {
    MuType a = gen.type();
    MuType b = gen.chance(0.8) ? gen.widen(a) : gen.type();
    MuType c = gen.chance(0.8) ? gen.widen(b) : gen.type();
    if (!isSubtype(a, b) || !isSubtype(b, c)) return;
    ++r.checked;
    if (!isSubtype(a, c)) violation(r, "A <= B <= C but not A <= C (B = " + pretty(b) + ")", a, c);
  });
  law("union-laws", [&](PropertyResult& r) {
    MuType a = gen.type(6);
    MuType b = gen.type(6);
    MuType c = gen.type(6);
    ++r.checked;
    if (!isEquivalent(mu::join(a, a), a)) violation(r, "A + A is not equivalent to A", mu::join(a, a), a);
    if (!isEquivalent(mu::join(a, b), mu::join(b, a))) violation(r, "union is not commutative", a, b);
    if (!isEquivalent(mu::join(mu::join(a, b), c), mu::join(a, mu::join(b, c))))
      violation(r, "union is not associative", mu::join(mu::join(a, b), c), mu::join(a, mu::join(b, c)));
  });
  law("e-fold", [&](PropertyResult& r) {
    MuType a;
    for (int tries = 0; tries < 50 && !a; ++tries) {
      MuType t = gen.type();
      if (t->kind() == TypeKind::Rec) a = t;
    }
    if (!a) return;
    ++r.checked;
    if (!isEquivalent(a, unfoldOnce(a))) violation(r, "a recursive type differs from its unfolding", a, unfoldOnce(a));
  });
  law("eq-implies-sub", [&](PropertyResult& r) {
    MuType a = gen.type();
    MuType b = gen.chance(0.5) ? gen.type() : (gen.chance(0.5) ? unfoldOnce(a) : gen.widen(a));
    if (!isEquivalent(a, b)) return;
    ++r.checked;
    if (!isSubtype(a, b) || !isSubtype(b, a)) violation(r, "equivalent but not mutual subtypes", a, b);
  });
  law("invertibility", [&](PropertyResult& r) {
    MuType a;
    for (int tries = 0; tries < 50 && !a; ++tries) {
      MuType t = headUnfold(gen.type());
      if (t->kind() == TypeKind::App || t->kind() == TypeKind::Arrow) a = t;
    }
    if (!a) return;
    MuType b;
    if (a->kind() == TypeKind::App) b = mu::app(gen.widen(a->left()), gen.widen(a->right()));
    else b = mu::arrow(gen.narrow(a->left()), gen.widen(a->right()));
    if (gen.chance(0.2)) b = headUnfold(gen.type());
    if (b->kind() != a->kind() || !isSubtype(a, b)) return;
    ++r.checked;
    bool ok = a->kind() == TypeKind::App
                  ? isSubtype(a->left(), b->left()) && isSubtype(a->right(), b->right())
                  : isSubtype(b->left(), a->left()) && isSubtype(a->right(), b->right());
    if (!ok) violation(r, "subtyping of non-union types is not invertible", a, b);
  });
  return out;
}

bool SuiteSummary::passed() const {
  for (const auto& p : properties)
    if (!p.passed()) return false;
  return differential.pairs == 0 || differential.passed();
}

namespace {

nlohmann::json toJson(const Counterexample& c) {
  nlohmann::json j = {{"property", c.property}, {"detail", c.detail}};
  if (!c.term.empty()) j["term"] = c.term;
  if (!c.type.empty()) j["type"] = c.type;
  return j;
}

}  // namespace

nlohmann::json SuiteSummary::toJson() const {
  nlohmann::json props = nlohmann::json::array();
  for (const auto& p : properties) {
    nlohmann::json ex = nlohmann::json::array();
    for (const auto& c : p.examples) ex.push_back(cap::toJson(c));
    props.push_back({{"name", p.name},
                     {"cases", p.cases},
                     {"checked", p.checked},
                     {"failures", p.failures},
                     {"passed", p.passed()},
                     {"seconds", p.seconds},
                     {"counterexamples", ex}});
  }
  nlohmann::json j = {{"seed", seed}, {"passed", passed()}, {"seconds", seconds}, {"properties", props}};
  if (differential.pairs > 0) {
    nlohmann::json ex = nlohmann::json::array();
    for (const auto& c : differential.failures) ex.push_back(cap::toJson(c));
    j["differential"] = {{"pairs", differential.pairs},
                         {"kmax", differential.kmax},
                         {"comparisons", differential.comparisons},
                         {"engineTrue", differential.engineTrue},
                         {"engineFalse", differential.engineFalse},
                         {"disagreements", differential.disagreements},
                         {"refutedWithinLimit", differential.refutedWithinLimit},
                         {"refutedFraction", differential.refutedFraction()},
                         {"inconclusive", differential.inconclusive},
                         {"reverifiedRefuted", differential.reverifiedRefuted},
                         {"contradictions", differential.contradictions},
                         {"passed", differential.passed()},
                         {"counterexamples", ex}};
  }
  return j;
}

std::string SuiteSummary::toText() const {
  std::ostringstream out;
  out << "seed " << seed << "\n";
  for (const auto& p : properties) {
    out << (p.passed() ? "ok   " : "FAIL ") << p.name << ": " << p.checked << "/" << p.cases << " checked, "
        << p.failures << " failures";
    out << " (" << static_cast<int>(p.seconds * 1000) << " ms)\n";
    for (const auto& c : p.examples) out << "     " << c.detail << "\n       term: " << c.term << "\n";
  }
  if (differential.pairs > 0) {
    const auto& d = differential;
    out << (d.passed() ? "ok   " : "FAIL ") << "differential: " << d.pairs << " pairs, " << d.comparisons
        << " comparisons, " << d.disagreements << " disagreements, " << d.refutedWithinLimit << "/" << d.engineFalse
        << " negatives refuted by depth " << 2 * d.kmax << ", " << d.inconclusive << " inconclusive ("
        << d.reverifiedRefuted << " refuted by depth " << 4 * d.kmax << "), " << d.contradictions
        << " contradictions\n";
  }
  out << (passed() ? "all properties hold" : "conformance FAILED") << "\n";
  return out.str();
}

SuiteSummary runConformance(const SuiteOptions& options, const PropertyFilter& filter) {
  auto start = Clock::now();
  SuiteSummary summary;
  summary.seed = options.gen.seed;
  if (filter.metatheory) {
    summary.properties.push_back(runSubjectReduction(options));
    summary.properties.push_back(runProgress(options));
    summary.properties.push_back(runSuccessfulMatch(options));
    summary.properties.push_back(runConfluence(options));
    summary.properties.push_back(runCompatibilityLemma(options));
    summary.properties.push_back(runMismatchLemma(options));
  }
  if (filter.laws) {
    for (auto& p : runRelationLaws(options)) summary.properties.push_back(std::move(p));
  }
  if (filter.differential) summary.differential = runDifferential(options.gen, options.pairs, options.kmax);
  summary.seconds = since(start);

  if (!summary.passed() && !options.reproPath.empty()) {
    std::ofstream repro(options.reproPath, std::ios::app);
    auto dump = [&](const Counterexample& c) {
      repro << "seed=" << options.gen.seed << " property=" << c.property << "\n  " << c.detail << "\n";
      if (!c.term.empty()) repro << "  term: " << c.term << "\n";
      if (!c.type.empty()) repro << "  type: " << c.type << "\n";
    };
    for (const auto& p : summary.properties)
      for (const auto& c : p.examples) dump(c);
    for (const auto& c : summary.differential.failures) dump(c);
  }
  return summary;
}

}  // namespace cap
