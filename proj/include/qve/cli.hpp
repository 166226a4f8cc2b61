#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qve::cli {

enum ExitCode : int {
  kOk = 0,
  kSolverFailure = 2,  // MaxIterations, Diverged, ComplexDominant, ...
  kInputError = 3,
};

/// Entry point of the `qve` tool; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace qve::cli
