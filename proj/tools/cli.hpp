#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jscc::cli {

// Runs one subcommand (exponent | sweep | simulate | optimize); args exclude
// the program name. Returns the process exit code: 0 ok, 2 usage error,
// 3 domain error, 4 infeasible simulation.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jscc::cli
