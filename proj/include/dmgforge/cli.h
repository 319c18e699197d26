#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dmgforge {

inline constexpr const char* kVersion = "0.1.0";

/// Runs the dmg-forge command line. `args` excludes the program name.
/// Exit codes: 0 success, 1 grammar errors or unreadable input, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dmgforge
