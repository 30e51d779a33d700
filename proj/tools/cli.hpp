#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace samgsr::cli {

/// Runs one samgsr command line. Returns the process exit code: 0 on
/// success, 2 for usage errors, 3 configuration, 4 invalid input, 5 parse
/// errors, 1 anything else. Failures also print a JSON error record to `err`
/// and, when the output directory is known, write it to error.json there.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// `args` excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace samgsr::cli
