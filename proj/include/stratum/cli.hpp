#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stratum::cli {

/// Exit codes of `run`.
enum Exit : int { kOk = 0, kViolation = 1, kUsage = 2, kUnknown = 3 };

/// Runs one command line (without the program name). Formula arguments may
/// be `@path` to read the text from a file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stratum::cli
