#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tdlc {

// Runs one command line (without the program name). Exit codes: 0 success,
// 1 domain error or failed check, 2 malformed input or flags.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tdlc
