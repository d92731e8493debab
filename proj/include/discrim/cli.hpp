#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace discrim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitBudget = 3;

/// Runs one subcommand; args excludes the program name. Tables go to --out
/// (written atomically) or to out; diagnostics go to err.
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace discrim
