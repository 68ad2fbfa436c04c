#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace magnonic::cli {

/// Exit codes of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidConfig = 1;
inline constexpr int kExitNumerical = 2;

/// Parses argv, dispatches the subcommand, writes the dataset to `out` (or
/// the --out file) and diagnostics prefixed with "error:" to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with the arguments after the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace magnonic::cli
