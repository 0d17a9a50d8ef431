#pragma once

#include <cstdint>
#include <functional>
#include <string_view>

#include "ihop/attack/coefficients.hpp"
#include "ihop/core/types.hpp"

namespace ihop::attack {

enum class CoefficientMode { Volume, FreqIid, Markov, VolumeFreqIid, Pancake };

std::string_view to_string(CoefficientMode mode);
CoefficientMode parse_coefficient_mode(std::string_view text);

struct IhopConfig {
  std::size_t n_iters = 1000;
  double p_free = 0.25;
  std::uint64_t rng_seed = 0;
  CoefficientMode coefficient_mode = CoefficientMode::Volume;
  bool negated_complement_sign = false;
  RhoCircMode rho_circ = RhoCircMode::ExcludeSelf;

  void validate() const;
};

/// Called after initialization (iteration 0) and after every iteration.
using IterationCallback = std::function<void(std::size_t iteration, const Assignment& current)>;

/// Builds the cost provider for `config.coefficient_mode` from observed and
/// auxiliary statistics. Throws std::invalid_argument when a statistic the
/// mode needs is missing. In Pancake mode `aux.markov` must already hold the
/// expected replica matrix.
ProviderPtr make_provider(const LeakageStats& leakage, const AuxStats& aux, const IhopConfig& config);

/// One linearized subproblem: assigns `free_toks` to distinct `free_kws`
/// minimizing d + (quadratic costs against `fixed`). Returned keywords are
/// aligned with `free_toks`.
std::vector<Keyword> solve_linear_step(std::span<const Keyword> free_kws,
                                       std::span<const Token> free_toks,
                                       std::span<const FixedPair> fixed,
                                       const CoefficientProvider& provider);

/// The fix-and-free iteration. Starts from the purely linear assignment, then
/// repeatedly frees ceil(p_free * m) random tokens, holds the rest at their
/// current keywords and re-solves the free block.
Assignment ihop_run(const CoefficientProvider& provider, const IhopConfig& config,
                    const IterationCallback& on_iteration = {});

Assignment ihop_run(const LeakageStats& leakage, const AuxStats& aux, const IhopConfig& config,
                    const IterationCallback& on_iteration = {});

}  // namespace ihop::attack
