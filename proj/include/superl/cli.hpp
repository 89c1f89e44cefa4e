#pragma once

#include <string>
#include <vector>

namespace superl {

/// Parses the argument list (without argv[0]), dispatches a subcommand, and
/// writes artifacts. Returns 0 on success, 1 on computation failure (solver
/// non-convergence, numeric breakdown), 2 on usage or config errors.
int run(const std::vector<std::string>& args);

}  // namespace superl
