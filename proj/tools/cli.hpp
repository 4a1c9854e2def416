#pragma once

#include "aklt/eigensolve.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace aklt::cli {

enum ExitCode : int {
  success = 0,
  criterion_failed = 1,
  usage_error = 2,
  solver_failure = 3,
  budget_refusal = 4,
};

/// Runs the aklt-gap command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Stores `result` in the cache directory under the key that `gap` and
/// `certify` compute for `graph` with default solver flags.
void store_cached_result(const std::string& dir, const LatticeGraph& graph,
                         const SpectralResult& result);

/// Hex SHA-256 of `text`.
std::string sha256_hex(const std::string& text);

}  // namespace aklt::cli
