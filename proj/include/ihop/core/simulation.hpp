#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "ihop/core/random.hpp"
#include "ihop/core/types.hpp"

namespace ihop {

/// Produces the access pattern the server reveals for one query of `keyword`.
/// Installing a non-default source is how query-time defenses (OSSE) hook in.
using PatternSource = std::function<AccessPattern(Keyword keyword, Rng& rng)>;

/// Full access-pattern leakage: one pattern per keyword, tokens randomly relabeled.
SimulatedTrace simulate_s1(const DocumentCollection& client_docs, std::uint64_t seed);

/// Access-pattern leakage of the queried keywords. Tokens are numbered by first
/// appearance and then relabeled with a seeded permutation of [m].
SimulatedTrace simulate_s2(const DocumentCollection& client_docs,
                           std::span<const Keyword> query_keywords, std::uint64_t seed,
                           const PatternSource& pattern_source = {});

/// Frequency-only leakage: the token sequence of the queried keywords (tokens
/// assigned as in S2). `num_keywords` bounds the keyword ids.
SimulatedTrace simulate_s3(std::span<const Keyword> query_keywords, std::size_t num_keywords,
                           std::uint64_t seed);

std::vector<Keyword> sample_queries_iid(const Vector& freal, std::size_t count, std::uint64_t seed);

/// Markov query stream: Pr(next = i | current = i') = Freal(i, i'); the first
/// keyword is drawn from the chain's stationary distribution.
std::vector<Keyword> sample_queries_markov(const Matrix& Freal, std::size_t count, std::uint64_t seed);

struct StationaryOptions {
  double tolerance = 1e-12;
  std::size_t max_iterations = 100'000;
};

/// Power iteration from the uniform vector. Throws std::runtime_error if the
/// iterate has not settled within the cap (reducible or periodic chain).
Vector stationary_distribution(const Matrix& F, StationaryOptions options = {});

/// Unweighted fraction of tokens mapped to their true keyword.
double accuracy(std::span<const Keyword> predicted, std::span<const Keyword> ground_truth);
double accuracy(const Assignment& assignment, std::span<const Keyword> ground_truth);

}  // namespace ihop
