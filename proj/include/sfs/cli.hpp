#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sfs::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalidInput = 2,
    kSolverFailure = 3,
    kCheckFailed = 4,
};

/// Runs one command line (without the program name) and returns the exit
/// code.  Subcommands: sl, spectrum, verify, moments.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sfs::cli
