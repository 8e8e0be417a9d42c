#ifndef FIBCLOSE_CLI_HPP
#define FIBCLOSE_CLI_HPP

#include <iosfwd>

namespace fibclose
{

// Exit codes
inline constexpr int exit_pass = 0;
inline constexpr int exit_fail = 1;
inline constexpr int exit_usage = 2;

// Entry point of the fibclose tool. Subcommands: search, verify-table,
// contfrac, first-bound, reduce, sweep, prove.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace fibclose

#endif
