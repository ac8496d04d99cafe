#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qca::cli {

/// Exit codes: 0 success, 1 runtime failure (limits, I/O), 2 invalid input or
/// a failed check.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qca::cli
