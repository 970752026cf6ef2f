#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flsim {

// Full command-line surface of the tool, separated from main() so tests can
// drive it against in-memory streams. args excludes the program name.
// Exit codes: 0 success, 1 infeasible/relay-trip result, 2 input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flsim
