#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chaos::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitUsage = 64;

std::string usage();

/// Runs one command. args[0] is the program name. Reports go to `out` (or the
/// --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace chaos::cli
