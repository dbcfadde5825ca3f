#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace geomom::cli {

/// Runs one command. args excludes the program name. Returns the process
/// exit code: 0 success, 1 numerical failure (error JSON on out), 2 usage
/// error (message on err).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace geomom::cli
