#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lwtune::cli {

// Parses argv-style arguments (program name excluded) and runs one
// subcommand. Success output and machine-readable error reports go to `out`,
// usage diagnostics to `err`.
//
// Returns the process exit code:
//   0  success (artifact written to stdout or the -o file)
//   1  domain or runtime failure; `out` carries {"error": {code, message}}
//   2  usage error (unknown flags, missing required options, bad values)
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace lwtune::cli
