#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace betaplane::cli {

/// Runs `betaplane <command> --config <path> --out <dir> [--jobs N]` and
/// returns the process exit status. Failures are reported on err as a single
/// "error: code=<n> kind=<kind> message=<text>" line.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

const std::vector<std::string>& command_names();

}  // namespace betaplane::cli
