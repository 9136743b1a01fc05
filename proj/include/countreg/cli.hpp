#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace countreg {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitValidation = 2,
  kExitConvergence = 3,
  kExitIo = 4,
};

/// Runs the `countreg` command line. `args` excludes the program name.
/// Subcommands: fit, predict, eval, simulate, bench.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace countreg
