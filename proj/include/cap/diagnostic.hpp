#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace cap {

/// 1-based source coordinates. Line 0 marks a synthesized node with no source.
struct Span {
  int line = 0;
  int column = 0;

  bool known() const { return line > 0; }
  friend bool operator==(const Span&, const Span&) = default;
};

enum class Severity { Error, Warning, Note };

enum class DiagnosticCode { Parse, Sort, Contractiveness, Type, Compatibility, Runtime };

const char* toString(DiagnosticCode code);
const char* toString(Severity severity);

struct Diagnostic {
  Severity severity = Severity::Error;
  Span span;
  DiagnosticCode code = DiagnosticCode::Parse;
  // Finer classification, e.g. "argument-mismatch" or "stuck-match".
  std::string kind;
  std::string message;
  std::optional<std::string> expected;
  std::optional<std::string> actual;
  // Index of the declaration the diagnostic belongs to, when known.
  std::optional<int> decl;

  std::string format() const;
};

Diagnostic makeDiagnostic(DiagnosticCode code, std::string kind, std::string message, Span span = {});

/// Carries a Diagnostic through exception-based internal control flow.
class DiagnosticError : public std::runtime_error {
 public:
  explicit DiagnosticError(Diagnostic d)
      : std::runtime_error(d.message), diagnostic_(std::move(d)) {}
  const Diagnostic& diagnostic() const { return diagnostic_; }

 private:
  Diagnostic diagnostic_;
};

/// Value-or-diagnostic result used on the public API boundary.
template <class T>
class Outcome {
 public:
  Outcome(T value) : state_(std::move(value)) {}
  Outcome(Diagnostic diagnostic) : state_(std::move(diagnostic)) {}

  bool ok() const { return std::holds_alternative<T>(state_); }
  explicit operator bool() const { return ok(); }

  const T& value() const& { return std::get<T>(state_); }
  T&& value() && { return std::get<T>(std::move(state_)); }
  const T& operator*() const& { return value(); }
  const T* operator->() const { return &std::get<T>(state_); }

  const Diagnostic& error() const { return std::get<Diagnostic>(state_); }

 private:
  std::variant<T, Diagnostic> state_;
};

}  // namespace cap
