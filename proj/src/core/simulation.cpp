#include "ihop/core/simulation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ihop {

namespace {

struct TokenLabels {
  std::vector<Token> sequence;      // token id per query
  std::vector<Keyword> ground_truth;  // token -> keyword
};

// First-appearance numbering followed by a seeded relabeling.
TokenLabels label_tokens(std::span<const Keyword> queries, std::size_t num_keywords, Rng& rng) {
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> first_token(num_keywords, kNone);
  std::vector<Keyword> order;
  std::vector<Token> provisional;
  provisional.reserve(queries.size());
  for (Keyword k : queries) {
    if (k >= num_keywords)
      throw std::invalid_argument("query keyword " + std::to_string(k) + " >= n=" +
                                  std::to_string(num_keywords));
    if (first_token[k] == kNone) {
      first_token[k] = order.size();
      order.push_back(k);
    }
    provisional.push_back(first_token[k]);
  }
  const auto relabel = random_permutation(order.size(), rng);
  TokenLabels out;
  out.ground_truth.assign(order.size(), 0);
  for (std::size_t t = 0; t < order.size(); ++t) out.ground_truth[relabel[t]] = order[t];
  out.sequence.reserve(provisional.size());
  for (Token t : provisional) out.sequence.push_back(relabel[t]);
  return out;
}

}  // namespace

SimulatedTrace simulate_s1(const DocumentCollection& client_docs, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = client_docs.num_keywords();
  auto patterns = client_docs.keyword_patterns();
  const auto perm = random_permutation(n, rng);  // token j <- keyword perm[j]

  SimulatedTrace out;
  out.trace.scenario = Scenario::S1;
  out.trace.token_count = n;
  out.trace.query_count = 0;
  out.trace.num_docs = client_docs.num_docs();
  out.trace.s1_patterns.reserve(n);
  out.ground_truth = perm;
  for (std::size_t j = 0; j < n; ++j) out.trace.s1_patterns.push_back(std::move(patterns[perm[j]]));
  return out;
}

SimulatedTrace simulate_s2(const DocumentCollection& client_docs,
                           std::span<const Keyword> query_keywords, std::uint64_t seed,
                           const PatternSource& pattern_source) {
  Rng rng(seed);
  auto labels = label_tokens(query_keywords, client_docs.num_keywords(), rng);

  SimulatedTrace out;
  out.trace.scenario = Scenario::S2;
  out.trace.token_count = labels.ground_truth.size();
  out.trace.query_count = query_keywords.size();
  out.trace.num_docs = client_docs.num_docs();
  out.trace.s2_events.reserve(query_keywords.size());

  if (pattern_source) {
    for (std::size_t r = 0; r < query_keywords.size(); ++r)
      out.trace.s2_events.push_back({labels.sequence[r], pattern_source(query_keywords[r], rng)});
  } else {
    const auto patterns = client_docs.keyword_patterns();
    for (std::size_t r = 0; r < query_keywords.size(); ++r)
      out.trace.s2_events.push_back({labels.sequence[r], patterns[query_keywords[r]]});
  }
  out.ground_truth = std::move(labels.ground_truth);
  return out;
}

SimulatedTrace simulate_s3(std::span<const Keyword> query_keywords, std::size_t num_keywords,
                           std::uint64_t seed) {
  Rng rng(seed);
  auto labels = label_tokens(query_keywords, num_keywords, rng);
  SimulatedTrace out;
  out.trace.scenario = Scenario::S3;
  out.trace.token_count = labels.ground_truth.size();
  out.trace.query_count = query_keywords.size();
  out.trace.s3_tokens = std::move(labels.sequence);
  out.ground_truth = std::move(labels.ground_truth);
  return out;
}

std::vector<Keyword> sample_queries_iid(const Vector& freal, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  DiscreteSampler sampler(freal);
  std::vector<Keyword> out(count);
  for (auto& k : out) k = sampler(rng);
  return out;
}

std::vector<Keyword> sample_queries_markov(const Matrix& Freal, std::size_t count, std::uint64_t seed) {
  if (Freal.rows() != Freal.cols() || Freal.rows() == 0)
    throw std::invalid_argument("sample_queries_markov: matrix must be square and nonempty");
  Rng rng(seed);
  const Vector start = stationary_distribution(Freal);
  std::vector<DiscreteSampler> columns;
  columns.reserve(static_cast<std::size_t>(Freal.cols()));
  for (Eigen::Index c = 0; c < Freal.cols(); ++c) columns.emplace_back(Vector(Freal.col(c)));

  std::vector<Keyword> out;
  out.reserve(count);
  if (count == 0) return out;
  Keyword current = DiscreteSampler(start)(rng);
  out.push_back(current);
  while (out.size() < count) {
    current = columns[current](rng);
    out.push_back(current);
  }
  return out;
}

Vector stationary_distribution(const Matrix& F, StationaryOptions options) {
  if (F.rows() != F.cols() || F.rows() == 0)
    throw std::invalid_argument("stationary_distribution: matrix must be square and nonempty");
  const auto n = F.rows();
  Vector pi = Vector::Constant(n, 1.0 / static_cast<double>(n));
  Vector next(n);
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    next.noalias() = F * pi;
    const double mass = next.sum();
    if (!(mass > 0)) throw std::runtime_error("stationary_distribution: chain lost all mass");
    next /= mass;
    const double delta = (next - pi).cwiseAbs().maxCoeff();
    pi.swap(next);
    if (delta <= options.tolerance) return pi;
  }
  throw std::runtime_error("stationary_distribution: no convergence within " +
                           std::to_string(options.max_iterations) +
                           " iterations (chain reducible or periodic?)");
}

double accuracy(std::span<const Keyword> predicted, std::span<const Keyword> ground_truth) {
  if (predicted.size() != ground_truth.size())
    throw std::invalid_argument("accuracy: size mismatch");
  if (predicted.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t j = 0; j < predicted.size(); ++j) hits += predicted[j] == ground_truth[j];
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

double accuracy(const Assignment& assignment, std::span<const Keyword> ground_truth) {
  return accuracy(std::span<const Keyword>(assignment.token_to_keyword()), ground_truth);
}

}  // namespace ihop
