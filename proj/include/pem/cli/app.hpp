#pragma once

// pem_sim entry point: subcommand dispatch, configuration layering
// (defaults, then --config file, then flags) and exit codes.

#include <ostream>

namespace pem::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitSolver = 3,
  kExitNoRoot = 4,
};

/// Runs one pem_sim invocation and returns its exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pem::cli
