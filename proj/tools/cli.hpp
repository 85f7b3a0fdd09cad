#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spiked/solver.hpp"

namespace spiked::cli {

enum ExitCode : int { kOk = 0, kInvalidInput = 2, kNumericalFailure = 3 };

/// Runs the command line front end; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "2..10", "5" or "2,3,7".
std::vector<int> parse_dims(const std::string& text);

/// "xmin:xmax:points".
GridConfig parse_grid(const std::string& text);

/// --grid flag, then SPIKED_BOUNDS_GRID, then nothing (solver default).
std::optional<GridConfig> resolve_grid(const std::string& flag_value);

/// Writes to `path + ".tmp"` and renames over `path` on success.
void write_file_atomically(const std::string& path, const std::string& contents);

}  // namespace spiked::cli
