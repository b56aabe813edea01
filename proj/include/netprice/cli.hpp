#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace netprice::cli {

/// Runs one command line (arguments after the program name). Returns 0 on
/// success, 1 on usage or validation errors, 2 on solver errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace netprice::cli
