#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hz::cli {

// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitInputError = 2;

// Entry point behind the hzeta executable. Records go to --output (appended)
// or `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace hz::cli
