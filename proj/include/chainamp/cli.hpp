#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chainamp {

// Dispatches one CLI invocation (arguments without the program name).
// Exit codes: 0 success, 2 usage error, 3 domain error, 4 I/O error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chainamp
