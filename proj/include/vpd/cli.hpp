#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vpd {

/// Process exit statuses.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitInputError = 2,
    kExitParameterError = 3,
    kExitNoClearViewpoints = 4,
};

/// Entry point of the `vpd` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace vpd
