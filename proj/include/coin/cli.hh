#pragma once

#include <iosfwd>

namespace coin {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitCounterexample = 1,
    kExitInputError = 2, // parse error, missing file, bad arguments
    kExitResourceLimit = 3,
    kExitDeadlock = 4,
};

/// Entry point of the `coin` tool, reusable from tests. argv[0] is the program name.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace coin
