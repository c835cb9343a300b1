#include "cap/diagnostic.hpp"

namespace cap {

const char* toString(DiagnosticCode code) {
  switch (code) {
    case DiagnosticCode::Parse: return "parse";
    case DiagnosticCode::Sort: return "sort";
    case DiagnosticCode::Contractiveness: return "contractiveness";
    case DiagnosticCode::Type: return "type";
    case DiagnosticCode::Compatibility: return "compatibility";
    case DiagnosticCode::Runtime: return "runtime";
  }
  return "unknown";
}

const char* toString(Severity severity) {
  switch (severity) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Note: return "note";
  }
  return "unknown";
}

std::string Diagnostic::format() const {
  std::string out;
  if (span.known()) out += std::to_string(span.line) + ":" + std::to_string(span.column) + ": ";
  out += toString(severity);
  out += " [";
  out += toString(code);
  if (!kind.empty()) out += "/" + kind;
  out += "] " + message;
  if (expected) out += "\n  expected: " + *expected;
  if (actual) out += "\n  actual:   " + *actual;
  return out;
}

Diagnostic makeDiagnostic(DiagnosticCode code, std::string kind, std::string message, Span span) {
  Diagnostic d;
  d.code = code;
  d.kind = std::move(kind);
  d.message = std::move(message);
  d.span = span;
  return d;
}

}  // namespace cap
