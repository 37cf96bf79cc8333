#pragma once

#include <string>
#include <vector>

namespace extsum {

// Entry point behind the command-line binary. Returns the process exit
// code: 0 success, 1 data/input failure, 2 usage error, 3 internal error.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, const char* const* argv);

}  // namespace extsum
