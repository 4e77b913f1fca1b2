#pragma once

// Command-line front end, callable in-process for tests.

#include <iosfwd>
#include <string>
#include <vector>

namespace join2pn {

enum ExitCode : int {
  kExitOk = 0,
  kExitFalse = 1,
  kExitUsage = 2,
  kExitCap = 3,
};

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace join2pn
