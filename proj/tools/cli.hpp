#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ct::cli {

// Runs one command. args excludes the program name. Returns the exit status:
// 0 for SAT/holds, 1 for UNSAT/fails, 2 for usage and validation errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ct::cli
