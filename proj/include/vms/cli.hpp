#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vms::cli {

/// Exit codes: 0 success, 1 solver or verification failure, 2 usage or
/// configuration error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace vms::cli
