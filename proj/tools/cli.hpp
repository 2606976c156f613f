#pragma once

#include <iosfwd>

namespace deadleaves::cli {

enum ExitCode : int
{
    exit_ok = 0,
    exit_validation_failed = 1,
    exit_usage = 2,
    exit_io = 3
};

/// Runs the command line in-process. argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace deadleaves::cli
