#pragma once

#include <iosfwd>

namespace pqk::cli {

enum ExitCode : int {
  Success = 0,
  // Malformed arguments, unreadable files, syntax and type errors, fuel
  // exhaustion.
  UserError = 1,
  // Stuck evaluation of a well-typed program, fuzz findings, unexpected
  // exceptions.
  InternalError = 2,
};

// `pqk <check|run|sim|circuit|fuzz> ...`. The gate set is read from the JSON
// file named by PQK_GATESET when that variable is set.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pqk::cli
