#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vclab {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitVerificationFailed = 1,
    kExitInputError = 2,
    kExitConditionNotMet = 3,
};

/// Runs the `vclab` command line (arguments without the program name) and
/// returns the exit code. Reports go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace vclab
