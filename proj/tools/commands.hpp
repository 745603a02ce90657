#pragma once

#include "wedge/selftest.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace wedge::cli {

/// Dispatches a full command line (argv[0] included) and returns the exit
/// code: 0 success, 1 domain or compute error, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// The same with the arguments after the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Prints one line per check and returns 0 when all pass, 1 otherwise.
int selftest(const SelftestOptions& options, std::ostream& out);

}  // namespace wedge::cli
