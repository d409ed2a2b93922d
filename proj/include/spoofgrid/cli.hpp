#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spoofgrid::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand. `args` excludes the program name. Data goes to `out`
/// (or the --out file) only on success; diagnostics and usage go to `err`.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spoofgrid::cli
