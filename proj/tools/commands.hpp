#pragma once

#include <string>
#include <vector>

namespace netml::app {

/// Runs the netml command line (args[0] is the program name) and returns the
/// process exit status: 0 success, 2 config error, 3 data error, 4 numerical abort.
int run(const std::vector<std::string>& args);

}  // namespace netml::app
