#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace penult::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Runs one command line (without the program name). Data goes to `out` or to
/// the --out file; failures are reported on `err` as a JSON error object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace penult::cli
