#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gausspoly::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitUsage = 2,
  kExitNumerical = 3,
};

/// Parses `args` (without the program name), runs the selected subcommand
/// and writes the report to `out` or the --output file. Diagnostics go to
/// `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gausspoly::cli
