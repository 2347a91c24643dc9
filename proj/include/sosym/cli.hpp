#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sosym {

// Exit codes of run_command.
inline constexpr int exit_success = 0;
inline constexpr int exit_rejected = 1;  // verify rejected, or no certificate / pseudoexpectation found
inline constexpr int exit_usage = 2;     // bad arguments, malformed or invalid input
inline constexpr int exit_resource = 3;  // resource cap or numeric failure

// args excludes the program name: {"refute", "problem.txt", "--degree", "2"}.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sosym
