#pragma once

// Subcommand entry points.  Each returns the process exit code; CliError is
// thrown for config (2) and I/O (3) failures.

#include <ostream>

#include "config.hpp"

namespace adagrow::cli {

int run_bound(OptionSource& src);
int run_sweep(OptionSource& src);
int run_simulate(OptionSource& src);
int run_validate(std::ostream& out);

}  // namespace adagrow::cli
