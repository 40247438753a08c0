#pragma once

#include <iosfwd>

namespace adi::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_numerical = 2,
};

/// Parses `argv`, runs the selected subcommand and returns the process exit
/// code. Normal output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace adi::cli
