#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace critpoly::cli {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNoConvergence = 2;

/// Runs one command: approximate, rate, verify, weakstar or divergence.
/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace critpoly::cli
