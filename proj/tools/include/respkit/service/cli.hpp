#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace respkit::service {

/// Runs the respkit command line. `args[0]` is the program name.
/// Exit codes: 0 success, 1 pipeline error (a JSON object on `err`), 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace respkit::service
