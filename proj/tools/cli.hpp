#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lpr::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kTruncated = 2, kContract = 3 };

/// Parses argv (argv[0] is the program name) and runs the subcommand.
/// Flags take precedence over LPR_* environment variables, which take
/// precedence over built-in defaults.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience for tests: run({"construct", "--p", "41"}, ...).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lpr::cli
