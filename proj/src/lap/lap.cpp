#include "ihop/lap/lap.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ihop::lap {

namespace {

void validate(const Matrix& cost) {
  if (cost.cols() > cost.rows())
    throw std::invalid_argument("lap: more columns (" + std::to_string(cost.cols()) +
                                ") than rows (" + std::to_string(cost.rows()) + ")");
  if (!cost.allFinite()) throw std::invalid_argument("lap: cost matrix has a non-finite entry");
}

}  // namespace

double assignment_cost(const Matrix& cost, const std::vector<std::size_t>& col_to_row) {
  double total = 0;
  for (std::size_t c = 0; c < col_to_row.size(); ++c)
    total += cost(static_cast<Eigen::Index>(col_to_row[c]), static_cast<Eigen::Index>(c));
  return total;
}

Solution solve_lap_min(const Matrix& cost) {
  validate(cost);
  const auto rows = static_cast<std::size_t>(cost.rows());
  const auto cols = static_cast<std::size_t>(cost.cols());
  Solution sol;
  if (cols == 0) return sol;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based: index 0 is the virtual source. col_pot/row_pot are the duals;
  // row_match[r] is the column currently holding row r (0 = free).
  std::vector<double> col_pot(cols + 1, 0.0), row_pot(rows + 1, 0.0);
  std::vector<std::size_t> row_match(rows + 1, 0), way(rows + 1, 0);
  std::vector<double> min_slack(rows + 1);
  std::vector<char> visited(rows + 1);

  for (std::size_t c = 1; c <= cols; ++c) {
    row_match[0] = c;
    std::size_t r0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(visited.begin(), visited.end(), 0);
    do {
      visited[r0] = 1;
      const std::size_t c0 = row_match[r0];
      double delta = kInf;
      std::size_t r1 = 0;
      for (std::size_t r = 1; r <= rows; ++r) {
        if (visited[r]) continue;
        const double reduced = cost(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c0 - 1)) -
                               col_pot[c0] - row_pot[r];
        if (reduced < min_slack[r]) {
          min_slack[r] = reduced;
          way[r] = r0;
        }
        if (min_slack[r] < delta) {
          delta = min_slack[r];
          r1 = r;
        }
      }
      for (std::size_t r = 0; r <= rows; ++r) {
        if (visited[r]) {
          col_pot[row_match[r]] += delta;
          row_pot[r] -= delta;
        } else {
          min_slack[r] -= delta;
        }
      }
      r0 = r1;
    } while (row_match[r0] != 0);
    // Flip the augmenting path back to the source.
    do {
      const std::size_t r1 = way[r0];
      row_match[r0] = row_match[r1];
      r0 = r1;
    } while (r0 != 0);
  }

  sol.col_to_row.assign(cols, 0);
  for (std::size_t r = 1; r <= rows; ++r)
    if (row_match[r] != 0) sol.col_to_row[row_match[r] - 1] = r - 1;
  sol.objective = assignment_cost(cost, sol.col_to_row);
  return sol;
}

namespace {

struct BruteForce {
  const Matrix& cost;
  std::vector<std::size_t> current;
  std::vector<char> used;
  Solution best;

  void search(std::size_t col, double partial) {
    if (col == current.size()) {
      if (partial < best.objective) {
        best.objective = partial;
        best.col_to_row = current;
      }
      return;
    }
    for (std::size_t r = 0; r < used.size(); ++r) {
      if (used[r]) continue;
      used[r] = 1;
      current[col] = r;
      search(col + 1, partial + cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)));
      used[r] = 0;
    }
  }
};

}  // namespace

Solution solve_lap_bruteforce(const Matrix& cost) {
  validate(cost);
  if (cost.cols() > 8) throw std::invalid_argument("lap bruteforce: at most 8 columns");
  BruteForce bf{cost, std::vector<std::size_t>(static_cast<std::size_t>(cost.cols())),
                std::vector<char>(static_cast<std::size_t>(cost.rows()), 0), {}};
  bf.best.objective = std::numeric_limits<double>::infinity();
  if (cost.cols() == 0) {
    bf.best.objective = 0;
    return bf.best;
  }
  bf.search(0, 0.0);
  // Report the objective summed in column order, like solve_lap_min.
  bf.best.objective = assignment_cost(cost, bf.best.col_to_row);
  return bf.best;
}

}  // namespace ihop::lap
