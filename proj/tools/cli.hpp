#pragma once

#include <ostream>

namespace zeta_opt::cli {

/// Exit codes returned by cli_main.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,  // runtime or numerical error, failed selftest
  kUsage = 2,    // unknown flag, missing argument
  kIo = 3,       // unreadable config, unwritable output
  kConfig = 4,   // config schema violation
};

/// Entry point for the zeta_opt tool. Diagnostics go to `err` as one line.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace zeta_opt::cli
