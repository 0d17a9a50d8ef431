#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ihop/core/types.hpp"

namespace ihop {

// std distributions are implementation-defined; the helpers below are not,
// so seeded runs reproduce across standard libraries.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
/// Stable per-stream seed: splitmix64(base ^ splitmix64(stream + 1)).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

double uniform01(Rng& rng);
/// Uniform integer in [0, n); n > 0.
std::size_t uniform_index(Rng& rng, std::size_t n);
bool bernoulli(Rng& rng, double p);
/// Number of failures before the first success of a Bernoulli(p) sequence.
std::size_t geometric_skip(Rng& rng, double p);

template <typename T>
void fisher_yates(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = uniform_index(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng);
/// k distinct indices from [0, n) via a partial Fisher–Yates pass, in draw order.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng);

/// Inverse-CDF sampler over a nonnegative weight vector.
class DiscreteSampler {
 public:
  DiscreteSampler() = default;
  explicit DiscreteSampler(std::span<const double> weights);
  explicit DiscreteSampler(const Vector& weights);

  std::size_t operator()(Rng& rng) const;
  std::size_t size() const { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

}  // namespace ihop
