#pragma once

#include <string>
#include <vector>

namespace wedge {

// Command-line driver.  Subcommands: spectrum, profile, heteroclinic,
// corrector, assemble, family, wedge-residual, barrier-check, verify-all.
// Common flags: --config <json>, --out <dir>, --seed <int>, --tol <float>.
// Each run writes <out>/<subcommand>.json (report with the fully resolved
// config embedded) and CSV data files documented in --help.
//
// Exit codes: 0 success, 2 config validation failure, 3 solver failure,
// 4 I/O failure.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

}  // namespace wedge
