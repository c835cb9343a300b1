#include "cap/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cap/conformance.hpp"
#include "cap/relations.hpp"
#include "cap/surface.hpp"
#include "cap/typecheck.hpp"

namespace cap {

namespace {

using nlohmann::json;

int severityRank(int code) {
  switch (code) {
    case kExitParse: return 3;
    case kExitType: return 2;
    case kExitRuntime: return 1;
    default: return 0;
  }
}

int worse(int a, int b) { return severityRank(a) >= severityRank(b) ? a : b; }

int exitCodeFor(const Diagnostic& d) {
  switch (d.code) {
    case DiagnosticCode::Parse:
    case DiagnosticCode::Sort:
    case DiagnosticCode::Contractiveness:
      return kExitParse;
    case DiagnosticCode::Type:
    case DiagnosticCode::Compatibility:
      return kExitType;
    case DiagnosticCode::Runtime:
      return kExitRuntime;
  }
  return kExitType;
}

json toJson(const Diagnostic& d) {
  json j = {{"decl", d.decl ? json(*d.decl) : json(nullptr)},
            {"code", toString(d.code)},
            {"kind", d.kind},
            {"severity", toString(d.severity)},
            {"span", {{"line", d.span.line}, {"column", d.span.column}}},
            {"message", d.message}};
  if (d.expected) j["expected"] = *d.expected;
  if (d.actual) j["actual"] = *d.actual;
  return j;
}

const char* toString(DeclKind k) {
  switch (k) {
    case DeclKind::Assume: return "assume";
    case DeclKind::Def: return "def";
    case DeclKind::Check: return "check";
    case DeclKind::Eval: return "eval";
  }
  return "unknown";
}

const char* toString(EvalStatus s) {
  switch (s) {
    case EvalStatus::Normal: return "normal";
    case EvalStatus::Stuck: return "stuck";
    case EvalStatus::OutOfFuel: return "out-of-fuel";
  }
  return "unknown";
}

/// Collects the output of one command. Text goes straight to the streams;
/// in JSON mode a single document is printed by finish().
class Reporter {
 public:
  Reporter(CliIo& io, bool jsonMode, std::string command, std::string source)
      : io_(io), json_(jsonMode), source_(std::move(source)) {
    doc_ = {{"command", std::move(command)}, {"diagnostics", json::array()}};
  }

  bool jsonMode() const { return json_; }
  json& doc() { return doc_; }

  void diagnostic(const Diagnostic& d) {
    exit_ = worse(exit_, exitCodeFor(d));
    if (json_) {
      doc_["diagnostics"].push_back(toJson(d));
      return;
    }
    std::string text = d.format();
    if (io_.color) {
      const std::string tag = toString(d.severity);
      if (auto at = text.find(tag); at != std::string::npos) text.replace(at, tag.size(), "\x1b[1;31m" + tag + "\x1b[0m");
    }
    if (!source_.empty()) io_.err << source_ << ":";
    io_.err << text << "\n";
  }

  void raise(int code) { exit_ = worse(exit_, code); }

  std::ostream& out() { return io_.out; }

  int finish() {
    if (json_) {
      doc_["exitCode"] = exit_;
      doc_["ok"] = exit_ == kExitOk;
      io_.out << doc_.dump(2) << "\n";
    }
    return exit_;
  }

 private:
  CliIo& io_;
  bool json_;
  std::string source_;
  json doc_;
  int exit_ = kExitOk;
};

std::optional<std::string> readInput(const std::string& path, CliIo& io, std::string& error) {
  if (path == "-") {
    std::ostringstream buf;
    buf << io.in.rdbuf();
    return buf.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    error = "cannot open '" + path + "'";
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

json traceJson(const EvalResult& run) {
  json trace = json::array();
  for (const auto& e : run.trace)
    trace.push_back({{"step", e.step}, {"redex", e.redex.toString()}, {"branch", e.branch + 1}});
  return trace;
}

void reportDecl(Reporter& r, const DeclResult& res, bool evalCommand) {
  if (res.diagnostic) r.diagnostic(*res.diagnostic);
  if (r.jsonMode()) {
    json j = {{"decl", res.index}, {"kind", toString(res.kind)}, {"ok", !res.diagnostic}};
    if (!res.name.empty()) j["name"] = res.name;
    if (res.type) j["type"] = pretty(res.type);
    if (res.evaluation) {
      j["status"] = toString(res.evaluation->status);
      j["steps"] = res.evaluation->steps;
      if (res.evaluation->status == EvalStatus::Normal) j["value"] = pretty(res.evaluation->term);
      if (!res.evaluation->trace.empty()) j["trace"] = traceJson(*res.evaluation);
    }
    r.doc()["results"].push_back(j);
    return;
  }
  if (evalCommand) {
    if (!res.evaluation) return;
    for (const auto& e : res.evaluation->trace)
      r.out() << "step " << e.step << ": redex at " << e.redex.toString() << ", branch " << e.branch + 1 << "\n";
    if (res.evaluation->status == EvalStatus::Normal) r.out() << pretty(res.evaluation->term) << "\n";
    return;
  }
  if (res.diagnostic) return;
  switch (res.kind) {
    case DeclKind::Assume:
      r.out() << "assume " << res.name << " : " << pretty(res.type) << "\n";
      break;
    case DeclKind::Def:
      r.out() << "def " << res.name << " : " << pretty(res.type) << "\n";
      break;
    case DeclKind::Check:
      r.out() << "check #" << res.index << " ok : " << pretty(res.type) << "\n";
      break;
    case DeclKind::Eval:
      r.out() << "eval #" << res.index << " : " << pretty(res.type) << "\n";
      break;
  }
}

int runProgramFile(CliIo& io, const std::string& path, bool evaluate, const ProgramOptions& base, bool jsonMode) {
  Reporter r(io, jsonMode, evaluate ? "eval" : "check", path == "-" ? "<stdin>" : path);
  r.doc()["file"] = path;
  r.doc()["results"] = json::array();
  std::string error;
  auto text = readInput(path, io, error);
  if (!text) {
    r.diagnostic(makeDiagnostic(DiagnosticCode::Parse, "io", error));
    return r.finish();
  }
  auto program = parseProgram(*text);
  if (!program) {
    r.diagnostic(program.error());
    return r.finish();
  }
  ProgramOptions options = base;
  options.evaluate = evaluate;
  for (const auto& res : checkProgram(*program, options)) reportDecl(r, res, evaluate);
  return r.finish();
}

int runType(CliIo& io, const std::string& input, const CheckOptions& options, bool jsonMode) {
  Reporter r(io, jsonMode, "type", "");
  auto term = parseTerm(input);
  if (!term) {
    r.diagnostic(term.error());
    return r.finish();
  }
  auto type = inferType({}, *term, options);
  if (!type) {
    r.diagnostic(type.error());
    return r.finish();
  }
  if (jsonMode) r.doc()["type"] = pretty(*type);
  else r.out() << pretty(*type) << "\n";
  return r.finish();
}

int runRelation(CliIo& io, const std::string& name, const std::string& lhs, const std::string& rhs, bool jsonMode) {
  Reporter r(io, jsonMode, name, "");
  auto a = parseType(lhs);
  auto b = parseType(rhs);
  if (!a) r.diagnostic(a.error());
  if (!b) r.diagnostic(b.error());
  if (!a || !b) return r.finish();
  bool holds = name == "sub" ? isSubtype(*a, *b) : isEquivalent(*a, *b);
  if (jsonMode) r.doc()["result"] = holds;
  else r.out() << (holds ? "true" : "false") << "\n";
  return r.finish();
}

int runOracle(CliIo& io, const std::string& lhs, const std::string& rhs, int kmax, RelMode mode, bool jsonMode) {
  Reporter r(io, jsonMode, "oracle", "");
  auto a = parseType(lhs);
  auto b = parseType(rhs);
  if (!a) r.diagnostic(a.error());
  if (!b) r.diagnostic(b.error());
  if (!a || !b) return r.finish();
  OracleReport rep = oracleCompare(*a, *b, kmax, mode);
  if (jsonMode) {
    auto& d = r.doc();
    d["mode"] = toString(mode);
    d["kmax"] = kmax;
    d["engine"] = rep.engine;
    d["perDepth"] = rep.perDepth;
    d["refutingDepth"] = rep.refutingDepth ? json(*rep.refutingDepth) : json(nullptr);
    d["inconclusive"] = rep.inconclusive;
    d["agree"] = rep.agree;
    return r.finish();
  }
  auto& out = r.out();
  out << "engine: " << (rep.engine ? "true" : "false") << "\n";
  for (std::size_t k = 0; k < rep.perDepth.size(); ++k)
    out << "k=" << k << ": " << (rep.perDepth[k] ? "true" : "false") << "\n";
  if (rep.refutingDepth) out << "refuting depth: " << *rep.refutingDepth << "\n";
  if (rep.inconclusive) out << "inconclusive: no refuting depth up to " << 2 * kmax << "\n";
  out << (rep.agree ? "agree" : "DISAGREE") << "\n";
  return r.finish();
}

int runConform(CliIo& io, const SuiteOptions& options, const std::string& only, bool jsonMode) {
  PropertyFilter filter;
  if (!only.empty()) {
    filter = {only == "metatheory", only == "differential", only == "laws"};
  }
  SuiteSummary summary = runConformance(options, filter);
  if (jsonMode) {
    json j = summary.toJson();
    j["command"] = "conform";
    j["exitCode"] = summary.passed() ? kExitOk : kExitConformance;
    io.out << j.dump(2) << "\n";
  } else {
    io.out << summary.toText();
    if (!summary.passed() && !options.reproPath.empty())
      io.err << "counterexamples appended to " << options.reproPath << "\n";
  }
  return summary.passed() ? kExitOk : kExitConformance;
}

bool complete(const std::string& buffer) {
  auto end = buffer.find_last_not_of(" \t\r\n");
  return end != std::string::npos && buffer[end] == ';';
}

int runRepl(CliIo& io, const ProgramOptions& base, bool jsonMode) {
  ProgramOptions options = base;
  options.evaluate = true;
  Session session(options);
  int index = 0;
  int exit = kExitOk;
  std::string buffer;
  std::string line;
  auto prompt = [&] {
    if (io.interactive) io.out << (buffer.empty() ? "cap> " : "...> ") << std::flush;
  };
  prompt();
  while (std::getline(io.in, line)) {
    if (buffer.empty()) {
      std::string cmd = line.substr(0, line.find_last_not_of(" \t\r") + 1);
      if (cmd == ":q" || cmd == ":quit") break;
      if (cmd == ":env") {
        for (const auto& [x, ty] : session.env()) io.out << x << " : " << pretty(ty) << "\n";
        prompt();
        continue;
      }
    }
    buffer += line + "\n";
    if (!complete(buffer)) {
      prompt();
      continue;
    }
    Reporter r(io, jsonMode, "repl", "");
    r.doc()["results"] = json::array();
    auto program = parseProgram(buffer);
    buffer.clear();
    if (!program) {
      r.diagnostic(program.error());
    } else {
      for (const auto& decl : program->decls) {
        DeclResult res = session.process(decl, index++);
        reportDecl(r, res, false);
        if (!jsonMode && res.evaluation && res.evaluation->status == EvalStatus::Normal)
          io.out << "  = " << pretty(res.evaluation->term) << "\n";
      }
    }
    exit = worse(exit, r.finish());
    prompt();
  }
  if (!buffer.empty() && buffer.find_first_not_of(" \t\r\n") != std::string::npos) {
    Reporter r(io, jsonMode, "repl", "");
    r.diagnostic(makeDiagnostic(DiagnosticCode::Parse, "unexpected-eof", "input ended inside a declaration"));
    exit = worse(exit, r.finish());
  }
  return exit;
}

}  // namespace

int runCommand(const std::vector<std::string>& args, CliIo io) {
  CLI::App app{"Type checker, evaluator and conformance suite for the calculus of applicative patterns"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Print help for every subcommand");

  bool jsonMode = false;
  bool trace = false;
  bool explain = false;
  int fuel = kDefaultFuel;
  int kmax = 8;
  std::string modeName = "sub";
  std::string file;
  std::string input;
  std::string lhs, rhs;
  SuiteOptions suite;
  std::string only;

  auto addJson = [&](CLI::App* sub) { sub->add_flag("--json", jsonMode, "Print one machine-readable JSON document"); };
  auto addCheckFlags = [&](CLI::App* sub) {
    sub->add_flag("--explain", explain, "Report every mismatching position in compatibility diagnostics");
    addJson(sub);
  };

  auto* check = app.add_subcommand("check", "Type-check every declaration of a program");
  check->add_option("file", file, "Program file, or - for standard input")->required();
  addCheckFlags(check);

  auto* eval = app.add_subcommand("eval", "Type-check a program and run its eval declarations");
  eval->add_option("file", file, "Program file, or - for standard input")->required();
  eval->add_option("--max-steps", fuel, "Reduction step budget per eval declaration")->check(CLI::PositiveNumber);
  eval->add_flag("--trace", trace, "Print each reduction step with the selected branch");
  addCheckFlags(eval);

  auto* type = app.add_subcommand("type", "Print the inferred type of a closed term");
  type->add_option("term", input, "Term text")->required();
  addCheckFlags(type);

  auto* sub = app.add_subcommand("sub", "Decide whether the first type is a subtype of the second");
  auto* equiv = app.add_subcommand("equiv", "Decide whether two types are equivalent");
  for (auto* cmd : {sub, equiv}) {
    cmd->add_option("lhs", lhs, "First type")->required();
    cmd->add_option("rhs", rhs, "Second type")->required();
    addJson(cmd);
  }

  auto* oracle = app.add_subcommand("oracle", "Compare the decision procedure against finite truncations");
  oracle->add_option("lhs", lhs, "First type")->required();
  oracle->add_option("rhs", rhs, "Second type")->required();
  oracle->add_option("--kmax", kmax, "Largest truncation depth reported")->check(CLI::PositiveNumber);
  oracle->add_option("--mode", modeName, "Relation to compare")->check(CLI::IsMember({"sub", "eq"}));
  addJson(oracle);

  auto* conform = app.add_subcommand("conform", "Run the property-based conformance suite");
  conform->add_option("--seed", suite.gen.seed, "Generator seed");
  conform->add_option("--cases", suite.cases, "Generated terms per metatheory property")->check(CLI::PositiveNumber);
  conform->add_option("--pairs", suite.pairs, "Type pairs for the differential oracle")->check(CLI::NonNegativeNumber);
  conform->add_option("--kmax", suite.kmax, "Truncation depth of the differential oracle")->check(CLI::PositiveNumber);
  conform->add_option("--confluence-cases", suite.confluenceCases, "Small terms for the confluence check")
      ->check(CLI::NonNegativeNumber);
  conform->add_option("--law-cases", suite.lawCases, "Instances per relation law")->check(CLI::NonNegativeNumber);
  conform->add_option("--max-steps", suite.fuel, "Reduction step budget per term")->check(CLI::PositiveNumber);
  conform->add_option("--repro", suite.reproPath, "File that receives counterexamples");
  conform->add_option("--only", only, "Run a single group")->check(CLI::IsMember({"metatheory", "differential", "laws"}));
  addJson(conform);

  auto* repl = app.add_subcommand("repl", "Read declarations interactively, keeping the environment");
  repl->add_option("--max-steps", fuel, "Reduction step budget per eval declaration")->check(CLI::PositiveNumber);
  repl->add_flag("--trace", trace, "Print each reduction step with the selected branch");
  addCheckFlags(repl);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, io.out, io.err);
    return code == 0 ? kExitOk : kExitParse;
  }

  ProgramOptions options;
  options.check.explain = explain;
  options.fuel = fuel;
  options.trace = trace;

  try {
    if (*check) return runProgramFile(io, file, false, options, jsonMode);
    if (*eval) return runProgramFile(io, file, true, options, jsonMode);
    if (*type) return runType(io, input, options.check, jsonMode);
    if (*sub) return runRelation(io, "sub", lhs, rhs, jsonMode);
    if (*equiv) return runRelation(io, "equiv", lhs, rhs, jsonMode);
    if (*oracle) return runOracle(io, lhs, rhs, kmax, modeName == "eq" ? RelMode::Eq : RelMode::Sub, jsonMode);
    if (*conform) return runConform(io, suite, only, jsonMode);
    if (*repl) return runRepl(io, options, jsonMode);
  } catch (const std::invalid_argument& e) {
    io.err << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitParse;
}

}  // namespace cap
