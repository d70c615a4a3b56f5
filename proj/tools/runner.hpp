#ifndef STCTL_TOOLS_RUNNER_HPP
#define STCTL_TOOLS_RUNNER_HPP

// CLI front-end entry point; see stctl_main.cpp for the thin main().

namespace stctl::cli {

// Parses arguments, dispatches the subcommand, and returns the process exit
// code: 0 = property holds, 1 = property fails, 2 = usage/input error.
int run(int argc, const char* const* argv);

}  // namespace stctl::cli

#endif  // STCTL_TOOLS_RUNNER_HPP
