#pragma once

#include <cstdint>

#include "ihop/core/types.hpp"

namespace ihop::pipeline {

struct SyntheticConfig {
  std::size_t n = 200;
  std::size_t num_docs = 10'000;
  double zipf_exponent = 1.0;
  double mixing = 0.5;       // 0: independent keywords
  std::size_t topics = 8;
  double max_volume = 0.2;   // marginal of the most frequent keyword

  void validate() const;
};

/// Topic-mixture corpus. Keyword i has base marginal p_i = max_volume /
/// (i+1)^s and a Dirichlet(1) affinity vector w_i over K topics. Each
/// document draws one topic t uniformly and contains keyword i with
/// probability min(1, p_i ((1 - mixing) + mixing K w_{i,t})), so marginals stay
/// near p_i while co-occurrence follows shared topic affinity.
DocumentCollection generate_synthetic(const SyntheticConfig& config, std::uint64_t seed);

/// (i+1)^-s normalized to unit mass; s = 0 gives the uniform vector.
Vector zipf_frequencies(std::size_t n, double exponent);

/// Random column-stochastic chain with sharply peaked columns: entries
/// u^sharpness for uniform u, normalized, then mixed with `floor` uniform
/// mass so the chain is irreducible and aperiodic.
Matrix random_correlated_chain(std::size_t n, std::uint64_t seed, double sharpness = 8.0, double floor = 0.01);

}  // namespace ihop::pipeline
