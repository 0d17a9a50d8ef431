#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "ihop/core/random.hpp"
#include "ihop/lap/lap.hpp"
#include "ihop/lap/selftest.hpp"

using namespace ihop;
using ihop::lap::solve_lap_bruteforce;
using ihop::lap::solve_lap_min;

TEST_CASE("zero diagonal") {
  Matrix c(2, 2);
  c << 0, 9, 9, 0;
  const auto s = solve_lap_min(c);
  CHECK(s.col_to_row == std::vector<std::size_t>{0, 1});
  CHECK(s.objective == 0);
  CHECK(solve_lap_bruteforce(c).objective == 0);
}

TEST_CASE("two by two crossing") {
  Matrix c(2, 2);
  c << 4, 1, 2, 3;
  const auto s = solve_lap_min(c);
  CHECK(s.col_to_row == std::vector<std::size_t>{1, 0});
  CHECK(s.objective == 3);
  CHECK(solve_lap_bruteforce(c).objective == 3);
}

TEST_CASE("random 6x5 against brute force") {
  Rng rng(17);
  for (int t = 0; t < 200; ++t) {
    Matrix c(6, 5);
    for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = uniform01(rng) * 100 - 50;
    const auto s = solve_lap_min(c);
    const auto b = solve_lap_bruteforce(c);
    CHECK(std::abs(s.objective - b.objective) < 1e-9);
    CHECK(std::set<std::size_t>(s.col_to_row.begin(), s.col_to_row.end()).size() == 5);
    CHECK(lap::assignment_cost(c, s.col_to_row) == doctest::Approx(s.objective));
  }
}

TEST_CASE("degenerate shapes") {
  Matrix one(1, 1);
  one << 3.5;
  CHECK(solve_lap_min(one).col_to_row == std::vector<std::size_t>{0});
  CHECK(solve_lap_bruteforce(one).objective == 3.5);

  const Matrix flat = Matrix::Constant(7, 4, 2.5);
  CHECK(solve_lap_min(flat).objective == doctest::Approx(10.0));
  CHECK(solve_lap_bruteforce(flat).objective == doctest::Approx(10.0));

  Matrix tall(5, 1);
  tall << 4, 3, -1, 7, -1;
  CHECK(solve_lap_min(tall).col_to_row == std::vector<std::size_t>{2});
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(solve_lap_min(Matrix::Zero(2, 3)), std::invalid_argument);
  Matrix c = Matrix::Zero(2, 2);
  c(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(solve_lap_min(c), std::invalid_argument);
  c(0, 1) = std::nan("");
  CHECK_THROWS_AS(solve_lap_min(c), std::invalid_argument);
  CHECK_THROWS(solve_lap_bruteforce(Matrix::Zero(10, 9)));
}

TEST_CASE("deterministic output") {
  Rng rng(2);
  Matrix c(9, 7);
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = static_cast<double>(uniform_index(rng, 3));
  CHECK(solve_lap_min(c).col_to_row == solve_lap_min(c).col_to_row);
}

TEST_CASE("larger instance is no worse than greedy and random maps") {
  Rng rng(5);
  Matrix c(60, 50);
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = uniform01(rng);
  const auto s = solve_lap_min(c);
  for (int t = 0; t < 50; ++t) {
    const auto perm = sample_without_replacement(60, 50, rng);
    CHECK(s.objective <= lap::assignment_cost(c, perm) + 1e-12);
  }
}

TEST_CASE("selftest suite") {
  const auto r = lap::run_selftest(300, 4);
  CHECK(r.failed == 0);
  CHECK(r.passed == 300);
}
