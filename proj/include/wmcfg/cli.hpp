#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wmcfg {

/// Runs one command line (without the program name). Words follow a `--`.
/// Returns 0 on success, 1 on a negative decision, 2 on malformed input and
/// 3 when `verify` could not cover its bounds.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace wmcfg
