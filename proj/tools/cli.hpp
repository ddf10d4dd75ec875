#pragma once

// Command-line front end. `run` takes the arguments after the program name and
// returns the process exit code: 0 success, 1 numerical failure, 2 usage or
// validation error.

#include <ostream>
#include <string>
#include <vector>

namespace volmat::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace volmat::cli
