#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mixdisc/errors.hpp"

namespace mixdisc::cli {

/// 1 for Input, 2 for Numerical, 3 for Invariant.
int exit_code(ErrorCategory category);

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`; "-" as a file argument reads `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace mixdisc::cli
