#pragma once

#include <vector>

#include "ihop/core/types.hpp"

namespace ihop::lap {

/// Result of a rectangular assignment: every column is matched to a distinct row.
struct Solution {
  std::vector<std::size_t> col_to_row;
  double objective = 0;
};

/// Minimum-cost assignment of the columns of `cost` (rows >= cols) to distinct rows.
///
/// Shortest augmenting paths with dual potentials, one column at a time, over
/// the rectangular matrix directly (no square padding): O(rows * cols^2).
/// Ties resolve toward the lowest row index reached by the augmenting search,
/// so the output is a deterministic function of the matrix.
///
/// Throws std::invalid_argument if cols > rows or an entry is not finite.
Solution solve_lap_min(const Matrix& cost);

/// Exhaustive search over all injective maps; test oracle for cols <= 8.
Solution solve_lap_bruteforce(const Matrix& cost);

double assignment_cost(const Matrix& cost, const std::vector<std::size_t>& col_to_row);

}  // namespace ihop::lap
