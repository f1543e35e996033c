#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ccd::cli {

/// Dispatches one toolkit invocation. `args` excludes the program name.
/// Output files and stdout are byte-identical for identical args and seeds.
/// Exit codes: 0 success, 1 validation failure, 2 usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ccd::cli
