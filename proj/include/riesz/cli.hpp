#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace riesz::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kConfigError = 2,
  kNotConverged = 3,
};

/// Runs one invocation. args excludes the program name. The JSON report goes
/// to out, the human-readable summary and diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace riesz::cli
