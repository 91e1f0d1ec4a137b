#ifndef ESQOE_CLI_HPP_
#define ESQOE_CLI_HPP_

#include <iosfwd>

namespace esqoe::cli {

// Runs one subcommand (gen, rank, allocate, bench, plot). Returns 0 on
// success, 1 on a runtime failure and 2 on a usage error.
int dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace esqoe::cli

#endif
