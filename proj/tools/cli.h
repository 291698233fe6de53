#ifndef SIWR_TOOLS_CLI_H
#define SIWR_TOOLS_CLI_H

#include <iosfwd>

namespace siwr::cli
{

enum ExitCode : int {
    exit_ok        = 0,
    exit_config    = 1,
    exit_numerical = 2,
};

/// Entry point of the `siwr` executable, with the streams injectable for tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace siwr::cli

#endif // SIWR_TOOLS_CLI_H
