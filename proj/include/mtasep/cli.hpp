#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mtasep {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // non-convergence, failed suite, runtime error
inline constexpr int kExitUsage = 2;

// args[0] is the program name. Results go to --out when given, else to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mtasep
