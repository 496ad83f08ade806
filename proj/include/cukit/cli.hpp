#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cukit {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitUnknown = 3,
};

/// Runs one CLI invocation; `args` excludes the program name. Reports go
/// to `out` (and to --output when given), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cukit
