#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rlr::cli {

// Runs one `rlr` invocation. `args` excludes the program name. Returns the
// process exit code: 0 success, 1 data/schema/parse errors, 2 invalid
// configuration or arguments.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rlr::cli
