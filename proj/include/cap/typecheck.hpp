#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cap/diagnostic.hpp"
#include "cap/matching.hpp"
#include "cap/surface.hpp"
#include "cap/syntax.hpp"
#include "cap/types.hpp"

namespace cap {

using TypeEnv = std::map<std::string, MuType>;

struct CheckOptions {
  // Examine every mismatching position in compatibility diagnostics.
  bool explain = false;
};

/// True when every maximal union component is a datatype head, i.e. the
/// type may stand left of `@`.
bool isDatatypeShaped(const MuType& t);

Outcome<MuType> typePattern(const Bindings& theta, const Pattern& p);

Outcome<MuType> inferType(const TypeEnv& gamma, const Term& t, const CheckOptions& options = {});

/// Empty on success.
std::optional<Diagnostic> checkType(const TypeEnv& gamma, const Term& t, const MuType& expected,
                                    const CheckOptions& options = {});

struct ProgramOptions {
  CheckOptions check;
  bool evaluate = false;
  int fuel = kDefaultFuel;
  bool trace = false;
};

struct DeclResult {
  int index = 0;  // 0-based declaration index
  DeclKind kind = DeclKind::Eval;
  std::string name;
  MuType type;  // the inferred type for Def, Check and Eval
  std::optional<Diagnostic> diagnostic;
  std::optional<EvalResult> evaluation;
};

/// Processes declarations in order. Every declaration is checked even after
/// an earlier one fails; failed Defs are left out of the environment.
std::vector<DeclResult> checkProgram(const Program& program, const ProgramOptions& options = {});

/// Checker state that persists across declarations, used by the REPL.
class Session {
 public:
  explicit Session(ProgramOptions options = {}) : options_(options) {}

  DeclResult process(const Decl& decl, int index);
  const TypeEnv& env() const { return gamma_; }

 private:
  ProgramOptions options_;
  TypeEnv gamma_;
  Substitution definitions_;
};

}  // namespace cap
