#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace talbot::cli {

enum ExitCode : int {
    kExitSuccess = 0,
    kExitUsage = 1,
    kExitNumeric = 2,
};

/// Runs one command line. `args` excludes the program name.
///
/// Subcommands: derive-params, invert, sweep, dump-contour. Reports go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace talbot::cli
