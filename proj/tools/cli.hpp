#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rpfree::cli {

/// Exit codes: 0 pass, 1 fail or inconclusive, 2 malformed input or usage, 3 internal error.
inline constexpr int kPass = 0;
inline constexpr int kFail = 1;
inline constexpr int kMalformed = 2;
inline constexpr int kInternal = 3;

/// Runs one command. `args` excludes the program name; "-" as an input path reads `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace rpfree::cli
