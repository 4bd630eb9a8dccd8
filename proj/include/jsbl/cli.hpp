#pragma once

#include <string>
#include <vector>

namespace jsbl::cli {

enum ExitCode : int { Ok = 0, RuntimeFailure = 1, UsageError = 2, ValidationError = 3 };

/// Parses arguments (argv[0] is the program name), runs the subcommand and
/// returns the process exit code. Diagnostics go to stderr as one line.
int parse_and_dispatch(int argc, const char* const* argv);
int parse_and_dispatch(const std::vector<std::string>& args);

}  // namespace jsbl::cli
