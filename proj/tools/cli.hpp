#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sdlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitPrecision = 2;

/// Runs one subcommand. `args` excludes the program name. Artifacts go to
/// --out / --summary paths ("-" or empty --out means `out`); diagnostics and
/// usage text go to `err`.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sdlab::cli
