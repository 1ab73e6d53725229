#pragma once

#include <ostream>

namespace gmce {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitStatisticalWarning = 2,  ///< non-convergence or boundary estimate; output is still written
};

/// Runs the `gmce` command line. Normal output goes to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gmce
