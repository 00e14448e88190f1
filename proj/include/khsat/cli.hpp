#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace khsat::cli
{

enum exit_code : int
{
    sat = 0,
    unsat = 1,
    input_error = 2,
    soundness_error = 3,
};

// Runs one subcommand; `args` excludes the program name. Returns the process
// exit code.
//
//   sat FILE [--json] [--dot OUT] [--no-prune] [--no-seed] [--dimacs OUT]
//   mc MODEL FORMULA [--json] [--depth-limit N] [--dot OUT]
//   translate FILE [--d "t,s;t,s"]
//   oracle FILE [--max-states N] [--max-actions N] [--props p,q] [--budget N] [--json]
//   fuzz [--seed N] [--trials N] [--mode M] [--max-states N] [--max-actions N] [--props p,q] [--jobs N]
int run( const std::vector<std::string>& args, std::ostream& out, std::ostream& err );

} // namespace khsat::cli
