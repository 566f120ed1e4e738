#pragma once

#include <ostream>

namespace jumpspec {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitParse = 2,
  kExitNumerical = 3,
  kExitNotFound = 4,
};

/// Runs one command line. Results go to `out` (or the --out file),
/// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jumpspec
