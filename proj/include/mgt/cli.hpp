#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mgt {

// Exit codes of the command-line runner.
enum ExitCode : int { ExitPass = 0, ExitRateFailure = 1, ExitConfigError = 2 };

// Runs one subcommand.  `args` excludes the program name.  Reports are written
// to --output-dir; progress and summaries go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mgt
