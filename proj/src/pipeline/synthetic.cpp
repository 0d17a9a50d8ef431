#include "ihop/pipeline/synthetic.hpp"

#include <cmath>
#include <stdexcept>

#include "ihop/core/random.hpp"

namespace ihop::pipeline {

void SyntheticConfig::validate() const {
  if (n == 0 || num_docs == 0) throw std::invalid_argument("SyntheticConfig: n and num_docs must be positive");
  if (zipf_exponent < 0) throw std::invalid_argument("SyntheticConfig: zipf exponent must be nonnegative");
  if (!(mixing >= 0 && mixing <= 1)) throw std::invalid_argument("SyntheticConfig: mixing must lie in [0,1]");
  if (topics == 0) throw std::invalid_argument("SyntheticConfig: need at least one topic");
  if (!(max_volume > 0 && max_volume <= 1)) throw std::invalid_argument("SyntheticConfig: max_volume must lie in (0,1]");
}

Vector zipf_frequencies(std::size_t n, double exponent) {
  Vector f(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) f(static_cast<Eigen::Index>(i)) = std::pow(static_cast<double>(i + 1), -exponent);
  return f / f.sum();
}

DocumentCollection generate_synthetic(const SyntheticConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  const std::size_t n = config.n;
  const std::size_t K = config.topics;

  // include[t][i]: probability that a topic-t document contains keyword i.
  std::vector<std::vector<double>> include(K, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double p = config.max_volume * std::pow(static_cast<double>(i + 1), -config.zipf_exponent);
    std::vector<double> w(K);
    double total = 0;
    for (auto& x : w) total += x = -std::log1p(-uniform01(rng));  // Exp(1) draws
    for (std::size_t t = 0; t < K; ++t) {
      const double tilt = (1.0 - config.mixing) + config.mixing * static_cast<double>(K) * w[t] / total;
      include[t][i] = std::min(1.0, p * tilt);
    }
  }

  std::vector<std::vector<Keyword>> docs(config.num_docs);
  for (auto& doc : docs) {
    const auto& probs = include[uniform_index(rng, K)];
    for (Keyword i = 0; i < n; ++i)
      if (bernoulli(rng, probs[i])) doc.push_back(i);
  }
  return DocumentCollection(n, std::move(docs));
}

Matrix random_correlated_chain(std::size_t n, std::uint64_t seed, double sharpness, double floor) {
  if (n == 0) throw std::invalid_argument("random_correlated_chain: n must be positive");
  if (!(floor > 0 && floor <= 1)) throw std::invalid_argument("random_correlated_chain: floor must lie in (0,1]");
  Rng rng(seed);
  const auto N = static_cast<Eigen::Index>(n);
  Matrix F(N, N);
  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index i = 0; i < N; ++i) F(i, j) = std::pow(uniform01(rng), sharpness);
    F.col(j) /= F.col(j).sum();
    F.col(j) = (1.0 - floor) * F.col(j) + Vector::Constant(N, floor / static_cast<double>(n));
  }
  return F;
}

}  // namespace ihop::pipeline
