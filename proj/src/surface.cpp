#include "cap/surface.hpp"

#include <cctype>
#include <functional>
#include <optional>
#include <utility>

namespace cap {

namespace {

enum class Tok {
  Upper,
  Lower,
  KwAssume,
  KwDef,
  KwCheck,
  KwEval,
  KwRec,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Colon,
  Semi,
  Bar,
  FatArrow,
  Arrow,
  Plus,
  At,
  Dot,
  Equals,
  End,
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Upper: return "constant";
    case Tok::Lower: return "identifier";
    case Tok::KwAssume: return "'assume'";
    case Tok::KwDef: return "'def'";
    case Tok::KwCheck: return "'check'";
    case Tok::KwEval: return "'eval'";
    case Tok::KwRec: return "'rec'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Semi: return "';'";
    case Tok::Bar: return "'|'";
    case Tok::FatArrow: return "'=>'";
    case Tok::Arrow: return "'->'";
    case Tok::Plus: return "'+'";
    case Tok::At: return "'@'";
    case Tok::Dot: return "'.'";
    case Tok::Equals: return "'='";
    case Tok::End: return "end of input";
  }
  return "token";
}

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

[[noreturn]] void parseError(const std::string& kind, const std::string& message, Span span) {
  throw DiagnosticError(makeDiagnostic(DiagnosticCode::Parse, kind, message, span));
}

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool identChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Span span{line, col};
    if (identStart(c)) {
      std::size_t j = i;
      while (j < src.size() && identChar(src[j])) ++j;
      std::string word(src.substr(i, j - i));
      Tok kind;
      if (word == "assume") kind = Tok::KwAssume;
      else if (word == "def") kind = Tok::KwDef;
      else if (word == "check") kind = Tok::KwCheck;
      else if (word == "eval") kind = Tok::KwEval;
      else if (word == "rec") kind = Tok::KwRec;
      else if (std::isupper(static_cast<unsigned char>(word[0]))) kind = Tok::Upper;
      else kind = Tok::Lower;
      out.push_back({kind, word, span});
      advance(j - i);
      continue;
    }
    auto two = src.substr(i, 2);
    if (two == "=>") {
      out.push_back({Tok::FatArrow, "=>", span});
      advance(2);
      continue;
    }
    if (two == "->") {
      out.push_back({Tok::Arrow, "->", span});
      advance(2);
      continue;
    }
    Tok kind;
    switch (c) {
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '[': kind = Tok::LBracket; break;
      case ']': kind = Tok::RBracket; break;
      case ',': kind = Tok::Comma; break;
      case ':': kind = Tok::Colon; break;
      case ';': kind = Tok::Semi; break;
      case '|': kind = Tok::Bar; break;
      case '+': kind = Tok::Plus; break;
      case '@': kind = Tok::At; break;
      case '.': kind = Tok::Dot; break;
      case '=': kind = Tok::Equals; break;
      default:
        parseError("unexpected-character", std::string("unexpected character '") + c + "'", span);
    }
    out.push_back({kind, std::string(1, c), span});
    advance(1);
  }
  out.push_back({Tok::End, "", Span{line, col}});
  return out;
}

RawType rawNode(RawTypeKind kind, std::string name, RawType left, RawType right, Span span) {
  return std::make_shared<const RawTypeNode>(
      RawTypeNode{kind, std::move(name), std::move(left), std::move(right), span});
}

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(lex(src)) {}

  Program program() {
    Program prog;
    while (peek().kind != Tok::End) prog.decls.push_back(decl());
    return prog;
  }

  Term wholeTerm() {
    Term t = term();
    expect(Tok::End);
    return t;
  }

  RawType wholeType() {
    RawType t = type();
    expect(Tok::End);
    return t;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  Token next() { return tokens_[pos_++]; }

  Token expect(Tok k) {
    if (!at(k)) {
      parseError("unexpected-token",
                 std::string("expected ") + describe(k) + ", found " + describe(peek().kind) +
                     (peek().text.empty() ? "" : " '" + peek().text + "'"),
                 peek().span);
    }
    return next();
  }

  MuType validated(const RawType& raw) {
    auto result = validateType(raw);
    if (!result) throw DiagnosticError(result.error());
    return *result;
  }

  Decl decl() {
    Decl d;
    d.span = peek().span;
    switch (peek().kind) {
      case Tok::KwAssume:
        next();
        d.kind = DeclKind::Assume;
        d.name = expect(Tok::Lower).text;
        expect(Tok::Colon);
        d.type = validated(type());
        break;
      case Tok::KwDef:
        next();
        d.kind = DeclKind::Def;
        d.name = expect(Tok::Lower).text;
        expect(Tok::Equals);
        d.term = term();
        break;
      case Tok::KwCheck:
        next();
        d.kind = DeclKind::Check;
        d.term = term();
        expect(Tok::Colon);
        d.type = validated(type());
        break;
      case Tok::KwEval:
        next();
        d.kind = DeclKind::Eval;
        d.term = term();
        break;
      default:
        parseError("unexpected-token",
                   std::string("expected a declaration, found ") + describe(peek().kind), peek().span);
    }
    expect(Tok::Semi);
    return d;
  }

  Term term() {
    if (at(Tok::LBracket)) {
      Span span = peek().span;
      std::vector<Branch> branches;
      branches.push_back(branch());
      while (at(Tok::Bar)) {
        next();
        branches.push_back(branch());
      }
      return TermNode::abs(std::move(branches), span);
    }
    return app();
  }

  Branch branch() {
    expect(Tok::LBracket);
    Branch b;
    if (!at(Tok::RBracket)) {
      do {
        Token name = expect(Tok::Lower);
        expect(Tok::Colon);
        MuType ty = validated(type());
        if (!b.bindings.emplace(name.text, ty).second)
          parseError("duplicate-binding", "matchable '" + name.text + "' is annotated twice", name.span);
        if (!at(Tok::Comma)) break;
        next();
      } while (true);
    }
    expect(Tok::RBracket);
    Span patSpan = peek().span;
    b.pattern = pattern();
    if (!isLinear(b.pattern)) parseError("non-linear-pattern", "a matchable occurs twice in the pattern", patSpan);
    expect(Tok::FatArrow);
    b.body = term();
    return b;
  }

  bool atomStart() const { return at(Tok::Lower) || at(Tok::Upper) || at(Tok::LParen); }

  Term app() {
    Term t = atom();
    while (atomStart()) {
      Term arg = atom();
      t = TermNode::app(t, arg, t->span);
    }
    return t;
  }

  Term atom() {
    Token tok = peek();
    switch (tok.kind) {
      case Tok::Lower:
        next();
        return TermNode::var(tok.text, tok.span);
      case Tok::Upper:
        next();
        return TermNode::constant(tok.text, tok.span);
      case Tok::LParen: {
        next();
        Term t = term();
        expect(Tok::RParen);
        return t;
      }
      default:
        parseError("unexpected-token", std::string("expected a term, found ") + describe(tok.kind), tok.span);
    }
  }

  Pattern pattern() {
    Pattern p = patAtom();
    while (atomStart()) {
      Pattern q = patAtom();
      p = PatternNode::compound(p, q, p->span);
    }
    return p;
  }

  Pattern patAtom() {
    Token tok = peek();
    switch (tok.kind) {
      case Tok::Lower:
        next();
        return PatternNode::matchable(tok.text, tok.span);
      case Tok::Upper:
        next();
        return PatternNode::constant(tok.text, tok.span);
      case Tok::LParen: {
        next();
        Pattern p = pattern();
        expect(Tok::RParen);
        return p;
      }
      default:
        parseError("unexpected-token", std::string("expected a pattern, found ") + describe(tok.kind),
                   tok.span);
    }
  }

  RawType type() {
    RawType left = untype();
    if (at(Tok::Arrow)) {
      Span span = next().span;
      RawType right = type();
      return rawNode(RawTypeKind::Arrow, "", left, right, left->span.known() ? left->span : span);
    }
    return left;
  }

  RawType untype() {
    RawType t = apptype();
    while (at(Tok::Plus)) {
      next();
      RawType r = apptype();
      t = rawNode(RawTypeKind::Union, "", t, r, t->span);
    }
    return t;
  }

  RawType apptype() {
    RawType t = tatom();
    while (at(Tok::At)) {
      next();
      RawType r = tatom();
      t = rawNode(RawTypeKind::App, "", t, r, t->span);
    }
    return t;
  }

  RawType tatom() {
    Token tok = peek();
    switch (tok.kind) {
      case Tok::Upper:
        next();
        return rawNode(RawTypeKind::Name, tok.text, nullptr, nullptr, tok.span);
      case Tok::Lower:
        next();
        return rawNode(RawTypeKind::Var, tok.text, nullptr, nullptr, tok.span);
      case Tok::KwRec: {
        next();
        Token v = expect(Tok::Lower);
        expect(Tok::Dot);
        RawType body = type();
        return rawNode(RawTypeKind::Rec, v.text, body, nullptr, tok.span);
      }
      case Tok::LParen: {
        next();
        RawType t = type();
        expect(Tok::RParen);
        return t;
      }
      default:
        parseError("unexpected-token", std::string("expected a type, found ") + describe(tok.kind),
                   tok.span);
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

template <class T, class F>
Outcome<T> guarded(F&& f) {
  try {
    return f();
  } catch (const DiagnosticError& e) {
    return e.diagnostic();
  }
}

// Sort inference and de Bruijn conversion.
class TypeValidator {
 public:
  MuType run(const RawType& raw) { return check(raw, false); }

 private:
  [[noreturn]] static void fail(DiagnosticCode code, const std::string& kind, const std::string& msg, Span span) {
    throw DiagnosticError(makeDiagnostic(code, kind, msg, span));
  }

  MuType check(const RawType& t, bool wantDatatype) {
    switch (t->kind) {
      case RawTypeKind::Name:
        if (t->name == kBulletName)
          fail(DiagnosticCode::Sort, "reserved-atom", "'" + t->name + "' is reserved for truncation", t->span);
        return mu::constant(t->name);
      case RawTypeKind::Var: {
        for (std::size_t k = scope_.size(); k-- > 0;) {
          if (scope_[k].first != t->name) continue;
          Sort s = scope_[k].second;
          if (wantDatatype && s != Sort::Datatype)
            fail(DiagnosticCode::Sort, "expected-datatype",
                 "type variable '" + t->name + "' is not a datatype variable", t->span);
          return MuTypeNode::makeBoundVar(static_cast<int>(scope_.size() - 1 - k), s, t->name);
        }
        fail(DiagnosticCode::Sort, "unbound-type-variable",
             "type variable '" + t->name + "' is not bound by an enclosing rec", t->span);
      }
      case RawTypeKind::App: {
        MuType d = check(t->left, true);
        MuType a = check(t->right, false);
        return mu::app(d, a);
      }
      case RawTypeKind::Arrow: {
        if (wantDatatype)
          fail(DiagnosticCode::Sort, "expected-datatype", "an arrow type is not a datatype", t->span);
        MuType a = check(t->left, false);
        MuType b = check(t->right, false);
        return mu::arrow(a, b);
      }
      case RawTypeKind::Union: {
        MuType a = check(t->left, wantDatatype);
        MuType b = check(t->right, wantDatatype);
        return mu::join(a, b);
      }
      case RawTypeKind::Rec: {
        MuType result;
        std::optional<DiagnosticError> datatypeError;
        scope_.emplace_back(t->name, Sort::Datatype);
        try {
          MuType body = check(t->left, true);
          result = MuTypeNode::makeRec(t->name, Sort::Datatype, body);
        } catch (const DiagnosticError& e) {
          datatypeError = e;
        }
        scope_.pop_back();
        if (!result) {
          if (wantDatatype) throw *datatypeError;
          scope_.emplace_back(t->name, Sort::Type);
          try {
            MuType body = check(t->left, false);
            result = MuTypeNode::makeRec(t->name, Sort::Type, body);
          } catch (...) {
            scope_.pop_back();
            throw;
          }
          scope_.pop_back();
        }
        if (!isContractive(result))
          fail(DiagnosticCode::Contractiveness, "non-contractive",
               "'" + t->name + "' must occur only under '@' or '->'", t->span);
        return result;
      }
    }
    fail(DiagnosticCode::Sort, "malformed", "malformed type", t->span);
  }

  std::vector<std::pair<std::string, Sort>> scope_;
};

// Printer. Type precedence levels: 0 arrow, 1 union, 2 application, 3 atom.
class TypePrinter {
 public:
  std::string print(const MuType& t) {
    std::string out;
    go(t, 0, true, out);
    return out;
  }

 private:
  void go(const MuType& t, int level, bool tail, std::string& out) {
    int own = 3;
    switch (t->kind()) {
      case TypeKind::Arrow: own = 0; break;
      case TypeKind::Union: own = 1; break;
      case TypeKind::App: own = 2; break;
      case TypeKind::Rec: own = tail ? 3 : -1; break;
      default: break;
    }
    bool parens = own < level || own < 0;
    if (parens) {
      out += "(";
      level = 0;
      tail = true;
    }
    switch (t->kind()) {
      case TypeKind::Const:
        out += t->name();
        break;
      case TypeKind::Var:
        if (t->isBound()) {
          std::size_t k = names_.size() - 1 - static_cast<std::size_t>(t->index());
          out += names_[k];
        } else {
          out += t->name();
        }
        break;
      case TypeKind::App:
        go(t->left(), 2, false, out);
        out += "@";
        go(t->right(), 3, tail, out);
        break;
      case TypeKind::Arrow:
        go(t->left(), 1, false, out);
        out += " -> ";
        go(t->right(), 0, tail, out);
        break;
      case TypeKind::Union:
        go(t->left(), 1, false, out);
        out += " + ";
        go(t->right(), 2, tail, out);
        break;
      case TypeKind::Rec: {
        std::set<std::string> avoid(names_.begin(), names_.end());
        auto free = freeTypeVariables(t);
        avoid.insert(free.begin(), free.end());
        std::string hint = t->name().empty() ? "a" : t->name();
        std::string name = freshName(hint, avoid);
        out += "rec " + name + ". ";
        names_.push_back(name);
        go(t->body(), 0, true, out);
        names_.pop_back();
        break;
      }
    }
    if (parens) out += ")";
  }

  std::vector<std::string> names_;
};

void printPattern(const Pattern& p, bool atomic, std::string& out) {
  switch (p->kind) {
    case PatternKind::Matchable:
    case PatternKind::Constant:
      out += p->name;
      return;
    case PatternKind::Compound:
      if (atomic) out += "(";
      printPattern(p->left, false, out);
      out += " ";
      printPattern(p->right, true, out);
      if (atomic) out += ")";
      return;
  }
}

// Term contexts: 0 full term, 1 function position, 2 argument position.
void printTerm(const Term& t, int ctx, std::string& out) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Constant:
      out += t->name;
      return;
    case TermKind::App: {
      bool parens = ctx == 2;
      if (parens) out += "(";
      printTerm(t->fun, 1, out);
      out += " ";
      printTerm(t->arg, 2, out);
      if (parens) out += ")";
      return;
    }
    case TermKind::Abs: {
      bool parens = ctx != 0;
      if (parens) out += "(";
      for (std::size_t i = 0; i < t->branches.size(); ++i) {
        const Branch& b = t->branches[i];
        if (i > 0) out += " | ";
        out += "[";
        bool first = true;
        for (const auto& [x, ty] : b.bindings) {
          if (!first) out += ", ";
          first = false;
          out += x + ":" + TypePrinter().print(ty);
        }
        out += "] ";
        printPattern(b.pattern, false, out);
        out += " => ";
        bool last = i + 1 == t->branches.size();
        bool wrap = !last && b.body->kind == TermKind::Abs;
        if (wrap) out += "(";
        printTerm(b.body, 0, out);
        if (wrap) out += ")";
      }
      if (parens) out += ")";
      return;
    }
  }
}

}  // namespace

Outcome<Program> parseProgram(std::string_view text) {
  return guarded<Program>([&] { return Parser(text).program(); });
}

Outcome<Term> parseTerm(std::string_view text) {
  return guarded<Term>([&] { return Parser(text).wholeTerm(); });
}

Outcome<RawType> parseRawType(std::string_view text) {
  return guarded<RawType>([&] { return Parser(text).wholeType(); });
}

Outcome<MuType> parseType(std::string_view text) {
  auto raw = parseRawType(text);
  if (!raw) return raw.error();
  return validateType(*raw);
}

Outcome<MuType> validateType(const RawType& raw) {
  return guarded<MuType>([&] { return TypeValidator().run(raw); });
}

std::string pretty(const MuType& t) { return TypePrinter().print(t); }

std::string pretty(const Pattern& p) {
  std::string out;
  printPattern(p, false, out);
  return out;
}

std::string pretty(const Term& t) {
  std::string out;
  printTerm(t, 0, out);
  return out;
}

}  // namespace cap
