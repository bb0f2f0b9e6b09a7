#pragma once

// Command-line driver. Kept out of main() so tests can run invocations
// in-process and inspect output and exit codes.
//
// Exit codes: 0 success (for classify: Conservative or necessary
// conditions hold), 1 domain failure (invalid map, NotConservative,
// runtime overflow), 2 Indeterminate classification, 64 usage errors,
// 66 unreadable files.

#include <string>
#include <vector>

namespace qpmaps {

struct CliResult {
    int exit_code = 0;
    std::string out; // stdout payload (JSON report, CSV, or map JSON)
    std::string err; // human-readable diagnostics
};

CliResult run_cli(std::vector<std::string> args);

} // namespace qpmaps
