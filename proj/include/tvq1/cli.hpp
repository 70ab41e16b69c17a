#pragma once

#include <string>
#include <vector>

namespace tvq1 {

// Command-line front end (subcommands: interpolate, denoise, flow, study).
// Returns the process exit code: 0 success, 1 usage error, 2 solver
// non-convergence, 3 I/O error.
int run_cli(const std::vector<std::string>& args);

} // namespace tvq1
