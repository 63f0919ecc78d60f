#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace htn {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitBlocked = 2,
  kExitBudget = 3,
  kExitInput = 4,
  kExitVerification = 5,
};

/// The `htnact` command line: act, plan and verify. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace htn
