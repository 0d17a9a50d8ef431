#pragma once

#include <functional>
#include <vector>

#include "ihop/harness/results.hpp"
#include "ihop/harness/spec.hpp"

namespace ihop::harness {

/// Seed of repetition `rep`; depends only on (base_seed, rep).
std::uint64_t repetition_seed(std::uint64_t base_seed, std::size_t rep);

/// One repetition: sample the keyword universe and the client/auxiliary
/// document split, simulate the scenario and defense, derive statistics, run
/// the attack (timed on its own) and score it.
ResultRow run_repetition(const ExperimentSpec& spec, std::size_t rep);

/// All repetitions of one configuration, in repetition order. Up to
/// spec.threads repetitions run concurrently.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

/// Runs every configuration in order, handing rows to `sink` one
/// configuration at a time from the calling thread.
void run_all(const std::vector<ExperimentSpec>& configurations,
             const std::function<void(const ResultRow&)>& sink);

}  // namespace ihop::harness
