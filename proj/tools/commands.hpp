#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace quakescore::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitUnassessable = 2;

inline constexpr int kSchemaVersion = 1;

// Runs the quakescore command line. args excludes the program name.
// Reports go to `out`, diagnostics and warnings to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace quakescore::cli
