#include "cap/matching.hpp"

#include <stdexcept>

#include "cap/surface.hpp"

namespace cap {

const char* toString(MatchKind kind) {
  switch (kind) {
    case MatchKind::Success: return "success";
    case MatchKind::Fail: return "fail";
    case MatchKind::Wait: return "wait";
  }
  return "unknown";
}

MatchOutcome combineOutcomes(const MatchOutcome& a, const MatchOutcome& b) {
  if (a.kind == MatchKind::Fail || b.kind == MatchKind::Fail) return MatchOutcome::fail();
  if (a.kind == MatchKind::Success && b.kind == MatchKind::Success) {
    Substitution merged = a.sigma;
    for (const auto& [x, u] : b.sigma) {
      if (!merged.emplace(x, u).second)
        throw std::logic_error("matching outcomes bind '" + x + "' twice");
    }
    return MatchOutcome::success(std::move(merged));
  }
  return MatchOutcome::wait();
}

MatchOutcome matchPattern(const Pattern& p, const Term& u) {
  if (p->kind == PatternKind::Matchable) return MatchOutcome::success({{p->name, u}});
  if (p->kind == PatternKind::Constant && u->kind == TermKind::Constant && p->name == u->name)
    return MatchOutcome::success();
  const bool decided = isMatchableForm(u);
  if (p->kind == PatternKind::Compound && u->kind == TermKind::App && decided)
    return combineOutcomes(matchPattern(p->left, u->fun), matchPattern(p->right, u->arg));
  return decided ? MatchOutcome::fail() : MatchOutcome::wait();
}

BranchChoice selectBranch(const Term& abs, const Term& arg) {
  for (std::size_t j = 0; j < abs->branches.size(); ++j) {
    MatchOutcome o = matchPattern(abs->branches[j].pattern, arg);
    if (o.kind == MatchKind::Fail) continue;
    if (o.kind == MatchKind::Wait) return {MatchKind::Wait, static_cast<int>(j), {}};
    return {MatchKind::Success, static_cast<int>(j), std::move(o.sigma)};
  }
  return {MatchKind::Fail, -1, {}};
}

namespace {

StepResult stepAt(const Term& t, const Position& at) {
  if (t->kind != TermKind::App) return {};
  const Term& r = t->fun;
  const Term& u = t->arg;
  if (!isValue(r)) {
    StepResult inner = stepAt(r, at.child(1));
    if (inner.kind == StepKind::Reduced) inner.term = TermNode::app(inner.term, u, t->span);
    return inner;
  }
  if (!isValue(u)) {
    StepResult inner = stepAt(u, at.child(2));
    if (inner.kind == StepKind::Reduced) inner.term = TermNode::app(r, inner.term, t->span);
    return inner;
  }
  if (r->kind != TermKind::Abs) return {};
  BranchChoice choice = selectBranch(r, u);
  StepResult result;
  result.redex = at;
  if (choice.kind == MatchKind::Success) {
    const Branch& b = r->branches[choice.branch];
    result.kind = StepKind::Reduced;
    result.term = applySubstitution(choice.sigma, b.body);
    result.branch = choice.branch;
    return result;
  }
  result.kind = StepKind::Stuck;
  if (choice.kind == MatchKind::Fail) {
    result.stuck = makeDiagnostic(DiagnosticCode::Runtime, "stuck-match",
                                  "no branch matches the argument " + pretty(u) + " at redex position " +
                                      at.toString(),
                                  t->span);
  } else {
    result.branch = choice.branch;
    result.stuck = makeDiagnostic(DiagnosticCode::Runtime, "undecided-match",
                                  "matching branch " + std::to_string(choice.branch + 1) + " against " +
                                      pretty(u) + " is undecided at redex position " + at.toString(),
                                  t->span);
  }
  return result;
}

}  // namespace

StepResult smallStep(const Term& t) { return stepAt(t, Position{}); }

EvalResult evaluate(const Term& t, int fuel, bool recordTrace) {
  EvalResult result;
  result.term = t;
  while (true) {
    if (result.steps >= fuel) {
      // Out of fuel only if another step is actually available.
      StepResult probe = smallStep(result.term);
      if (probe.kind == StepKind::Normal) return result;
      if (probe.kind == StepKind::Stuck) {
        result.status = EvalStatus::Stuck;
        result.diagnostic = probe.stuck;
        return result;
      }
      result.status = EvalStatus::OutOfFuel;
      result.diagnostic = makeDiagnostic(DiagnosticCode::Runtime, "out-of-fuel",
                                         "evaluation did not finish within " + std::to_string(fuel) +
                                             " steps",
                                         t->span);
      return result;
    }
    StepResult s = smallStep(result.term);
    switch (s.kind) {
      case StepKind::Normal:
        return result;
      case StepKind::Stuck:
        result.status = EvalStatus::Stuck;
        result.diagnostic = s.stuck;
        return result;
      case StepKind::Reduced:
        if (recordTrace) result.trace.push_back({result.steps + 1, s.redex, s.branch});
        result.term = s.term;
        ++result.steps;
        break;
    }
  }
}

std::optional<Term> betaContract(const Term& redex) {
  if (redex->kind != TermKind::App || redex->fun->kind != TermKind::Abs) return std::nullopt;
  BranchChoice choice = selectBranch(redex->fun, redex->arg);
  if (choice.kind != MatchKind::Success) return std::nullopt;
  return applySubstitution(choice.sigma, redex->fun->branches[choice.branch].body);
}

namespace {

void collectSites(const Term& t, RedexPath& path, std::vector<RedexPath>& out) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Constant:
      return;
    case TermKind::App:
      if (betaContract(t)) out.push_back(path);
      path.push_back(1);
      collectSites(t->fun, path, out);
      path.back() = 2;
      collectSites(t->arg, path, out);
      path.pop_back();
      return;
    case TermKind::Abs:
      for (std::size_t i = 0; i < t->branches.size(); ++i) {
        path.push_back(3 + static_cast<int>(i));
        collectSites(t->branches[i].body, path, out);
        path.pop_back();
      }
      return;
  }
}

Term rebuildAt(const Term& t, const RedexPath& path, std::size_t depth) {
  if (depth == path.size()) {
    auto reduct = betaContract(t);
    if (!reduct) throw std::logic_error("contractAt: no redex at the given path");
    return *reduct;
  }
  int step = path[depth];
  if (step == 1 || step == 2) {
    if (t->kind != TermKind::App) throw std::logic_error("contractAt: invalid path");
    if (step == 1) return TermNode::app(rebuildAt(t->fun, path, depth + 1), t->arg, t->span);
    return TermNode::app(t->fun, rebuildAt(t->arg, path, depth + 1), t->span);
  }
  std::size_t index = static_cast<std::size_t>(step - 3);
  if (t->kind != TermKind::Abs || index >= t->branches.size())
    throw std::logic_error("contractAt: invalid path");
  std::vector<Branch> branches = t->branches;
  branches[index].body = rebuildAt(t->branches[index].body, path, depth + 1);
  return TermNode::abs(std::move(branches), t->span);
}

}  // namespace

std::vector<RedexPath> redexSites(const Term& t) {
  std::vector<RedexPath> out;
  RedexPath path;
  collectSites(t, path, out);
  return out;
}

Term contractAt(const Term& t, const RedexPath& path) { return rebuildAt(t, path, 0); }

NormalizeResult normalizeCbvThenStrong(const Term& t, int fuel) {
  NormalizeResult result;
  EvalResult weak = evaluate(t, fuel);
  result.term = weak.term;
  result.steps = weak.steps;
  if (weak.status == EvalStatus::OutOfFuel) return result;
  while (result.steps < fuel) {
    // Sites are collected in pre-order, so the first is leftmost-outermost.
    auto sites = redexSites(result.term);
    if (sites.empty()) {
      result.terminated = true;
      return result;
    }
    result.term = contractAt(result.term, sites.front());
    ++result.steps;
  }
  return result;
}

NormalizeResult normalizeRandom(const Term& t, int fuel, std::mt19937_64& rng) {
  NormalizeResult result;
  result.term = t;
  while (result.steps < fuel) {
    auto sites = redexSites(result.term);
    if (sites.empty()) {
      result.terminated = true;
      return result;
    }
    std::uniform_int_distribution<std::size_t> pick(0, sites.size() - 1);
    result.term = contractAt(result.term, sites[pick(rng)]);
    ++result.steps;
  }
  return result;
}

}  // namespace cap
