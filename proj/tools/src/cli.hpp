#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eikamp::cli {

enum ExitCode : int {
  kOk = 0,
  kBoundExceeded = 1,
  kBoundary = 2,
  kUsage = 64,
  kParse = 65,
};

/// Runs one command line (without the program name).  Tables go to --out
/// or `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eikamp::cli
