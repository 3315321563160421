#ifndef ISCHED_CLI_APP_HPP
#define ISCHED_CLI_APP_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace isched::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;    // unexpected I/O or internal error
inline constexpr int kExitInvalid = 2;    // bad flags, parse or validation failure
inline constexpr int kExitInfeasible = 3; // no feasible schedule

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace isched::cli

#endif // ISCHED_CLI_APP_HPP
