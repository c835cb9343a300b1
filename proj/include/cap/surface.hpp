#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cap/diagnostic.hpp"
#include "cap/syntax.hpp"
#include "cap/types.hpp"

namespace cap {

enum class DeclKind { Assume, Def, Check, Eval };

struct Decl {
  DeclKind kind;
  std::string name;  // Assume and Def only
  Term term;         // Def, Check and Eval
  MuType type;       // Assume and Check
  Span span;
};

struct Program {
  std::vector<Decl> decls;
};

/// Type expression as written, before sort inference and de Bruijn conversion.
enum class RawTypeKind { Name, Var, App, Arrow, Union, Rec };

struct RawTypeNode;
using RawType = std::shared_ptr<const RawTypeNode>;

struct RawTypeNode {
  RawTypeKind kind;
  std::string name;  // Name, Var, and the binder of Rec
  RawType left;      // also the body of Rec
  RawType right;
  Span span;
};

Outcome<Program> parseProgram(std::string_view text);
Outcome<Term> parseTerm(std::string_view text);
Outcome<RawType> parseRawType(std::string_view text);
/// parseRawType followed by validateType.
Outcome<MuType> parseType(std::string_view text);

/// Infers binder sorts, enforces the datatype/type stratification and
/// contractiveness, and rejects free type variables and the reserved atom.
Outcome<MuType> validateType(const RawType& raw);

std::string pretty(const Term& t);
std::string pretty(const Pattern& p);
std::string pretty(const MuType& t);

}  // namespace cap
