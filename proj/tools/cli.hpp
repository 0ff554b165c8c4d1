#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hfusion::cli {

enum ExitCode : int {
    kExitOk = 0,
    /// Validation or gradient-check failure, unreadable or inconsistent data.
    kExitFailure = 1,
    /// Bad usage or configuration.
    kExitUsage = 2,
};

/// Runs one subcommand. `args` excludes the program name.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hfusion::cli
