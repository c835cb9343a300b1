#include <unistd.h>

#include <cstdlib>
#include <cstring>
#include <iostream>

#include "cap/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const char* color = std::getenv("CAP_COLOR");
  bool useColor = isatty(STDERR_FILENO) && !(color && std::strcmp(color, "0") == 0);
  return cap::runCommand(args, {std::cin, std::cout, std::cerr, useColor, static_cast<bool>(isatty(STDIN_FILENO))});
}
