#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "mapca/error.hpp"

namespace mapca::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int unexpected_outcome = 1;
inline constexpr int malformed_input = 2;
inline constexpr int not_spd = 3;
inline constexpr int dimension_mismatch = 4;
inline constexpr int rank_deficient = 5;
inline constexpr int isolated_vertex = 6;
inline constexpr int constraint_violation = 7;
} // namespace exit_code

int exit_code_for(ErrorKind kind) noexcept;

/// Runs one command. `args` excludes the program name. Results go to the
/// requested files, or to `out` when no path is given; diagnostics go to
/// `err`. Nothing is written on a nonzero exit.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mapca::cli
