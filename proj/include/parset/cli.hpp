#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace parset {

inline constexpr const char* kVersion = "0.1.0";

// Runs the command line given argv-style arguments (program name excluded).
// Primary output goes to `out` (or the --out file); the run manifest goes to
// `err`. Exit codes: 0 success, 1 verification failure, 2 usage/parse error.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace parset
