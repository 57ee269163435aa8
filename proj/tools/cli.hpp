#pragma once

#include <string>
#include <vector>

namespace blockfit::cli {

// Runs the command-line tool on argv[1..]. Returns the process exit code:
// 0 success, 1 usage error, 2 data error, 3 numerical failure. Errors go to
// stderr with E_USAGE: / E_DATA: / E_NUM: prefixes.
int run(const std::vector<std::string>& args);

}  // namespace blockfit::cli
