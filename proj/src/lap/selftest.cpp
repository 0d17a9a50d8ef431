#include "ihop/lap/selftest.hpp"

#include <cmath>
#include <sstream>

#include "ihop/core/random.hpp"
#include "ihop/lap/lap.hpp"

namespace ihop::lap {

SelfTestReport run_selftest(std::size_t instances, std::uint64_t seed) {
  SelfTestReport report;
  Rng rng(seed);
  for (std::size_t k = 0; k < instances; ++k) {
    const std::size_t cols = 1 + uniform_index(rng, 7);
    const std::size_t rows = cols + uniform_index(rng, 10 - cols);
    const bool integer = k % 2 == 0;
    Matrix cost(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < cost.rows(); ++i)
      for (Eigen::Index j = 0; j < cost.cols(); ++j)
        cost(i, j) = integer ? static_cast<double>(uniform_index(rng, 21)) : -10.0 + 20.0 * uniform01(rng);

    const auto fast = solve_lap_min(cost);
    const auto slow = solve_lap_bruteforce(cost);
    std::vector<char> used(rows, 0);
    bool injective = fast.col_to_row.size() == cols;
    for (std::size_t r : fast.col_to_row) {
      injective = injective && r < rows && !used[r];
      if (r < rows) used[r] = 1;
    }
    const double recomputed = assignment_cost(cost, fast.col_to_row);
    const double gap = std::abs(fast.objective - slow.objective);
    const bool ok = injective && (integer ? gap == 0.0 : gap <= 1e-9) && std::abs(recomputed - fast.objective) <= 1e-9;
    if (ok) {
      ++report.passed;
    } else {
      ++report.failed;
      if (report.failures.size() < 5) {
        std::ostringstream msg;
        msg << "instance " << k << " (" << rows << "x" << cols << (integer ? ", integer" : ", real")
            << "): solver " << fast.objective << " vs oracle " << slow.objective;
        report.failures.push_back(msg.str());
      }
    }
  }
  return report;
}

}  // namespace ihop::lap
