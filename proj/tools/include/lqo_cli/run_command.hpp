#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lqo::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 2,
  kValidation = 3,
  kNumerical = 4,
};

/// Runs one subcommand. `args` excludes the program name. Primary output goes
/// to `out`; warnings and the error JSON {code, message, context} go to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lqo::cli
