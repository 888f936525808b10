#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace walkwait::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitIo = 3;

/// Runs `walkwait <args...>` and returns the process exit code. `args`
/// excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Locale-independent shortest-general formatting with `digits` significant
/// digits.
std::string format_number(double x, int digits = 12);

}  // namespace walkwait::cli
