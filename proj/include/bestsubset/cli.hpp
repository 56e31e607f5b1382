#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bestsubset {

inline constexpr int kSchemaVersion = 1;

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitUsage = 2 };

/// Runs the command line `args` (program name excluded). The JSON report goes
/// to `out`, diagnostics and the human summary to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bestsubset
