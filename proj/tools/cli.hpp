#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace anml::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kInfeasible = 3,
  kUnsupported = 4,
  kIoFailure = 5,
};

/// Runs one command line; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace anml::cli
