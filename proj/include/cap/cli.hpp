#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cap {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitType = 1,         // type or compatibility error
  kExitParse = 2,        // parse, sort or contractiveness error, and bad usage
  kExitRuntime = 3,      // stuck or out of fuel
  kExitConformance = 4,  // a conformance property failed
};

struct CliIo {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  bool color = false;        // ANSI highlighting of diagnostics
  bool interactive = false;  // print REPL prompts
};

/// Runs one invocation; `args` excludes the program name. When several
/// diagnostics occur the exit code is the most severe by the order
/// parse (2) > type (1) > runtime (3).
int runCommand(const std::vector<std::string>& args, CliIo io);

}  // namespace cap
