#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace irf::cli {

enum ExitCode : int { Pass = 0, Failure = 1, Usage = 2 };

/// Runs the command line; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace irf::cli
