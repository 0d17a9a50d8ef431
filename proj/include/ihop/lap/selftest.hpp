#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ihop::lap {

struct SelfTestReport {
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::vector<std::string> failures;  // first few mismatches
};

/// Compares solve_lap_min against the brute-force oracle on `instances`
/// seeded random matrices with 1 <= cols <= 7 and cols <= rows <= 9.
/// Even instances draw integer costs in [0, 20] and must match exactly; odd
/// ones draw reals in [-10, 10] and must match within 1e-9.
SelfTestReport run_selftest(std::size_t instances = 1000, std::uint64_t seed = 0);

}  // namespace ihop::lap
