#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace deltaloop::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInternalError = 1;
inline constexpr int kValidationError = 2;

/// Runs the command line `args` (without the program name). Tables go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace deltaloop::cli
