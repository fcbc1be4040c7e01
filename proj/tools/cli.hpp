#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fdyadic::cli {

/// Dispatches one command line (without the program name). Writes results to
/// `out` and diagnostics to `err`. Returns 0 on success, 1 on validation
/// errors, 2 on verification failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fdyadic::cli
