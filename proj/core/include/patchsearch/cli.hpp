#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace patchsearch::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kInternalError = 3,
};

/// Runs the `patchsearch` command line. `args[0]` is the program name.
/// Subcommands: enroll, search, eval, bench, synth.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace patchsearch::cli
