#include "ihop/core/statistics.hpp"

#include <stdexcept>
#include <string>

namespace ihop {

Matrix compute_observed_volume(std::span<const AccessPattern> patterns, std::size_t num_docs) {
  if (patterns.empty()) throw std::invalid_argument("compute_observed_volume: no access patterns");
  if (num_docs == 0) throw std::invalid_argument("compute_observed_volume: N_d must be positive");
  for (const auto& p : patterns)
    if (p.size() != num_docs)
      throw std::invalid_argument("compute_observed_volume: pattern length " +
                                  std::to_string(p.size()) + " != N_d " + std::to_string(num_docs));

  const auto m = static_cast<Eigen::Index>(patterns.size());
  const double scale = 1.0 / static_cast<double>(num_docs);
  Matrix V(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    V(j, j) = static_cast<double>(patterns[j].count()) * scale;
    for (Eigen::Index k = j + 1; k < m; ++k) {
      const double v = static_cast<double>(patterns[j].and_count(patterns[k])) * scale;
      V(j, k) = v;
      V(k, j) = v;
    }
  }
  return V;
}

AuxVolume compute_aux_volume(const DocumentCollection& aux_docs) {
  const std::size_t N = aux_docs.num_docs();
  if (N == 0) throw std::invalid_argument("compute_aux_volume: auxiliary collection is empty");
  const auto n = static_cast<Eigen::Index>(aux_docs.num_keywords());
  const auto patterns = aux_docs.keyword_patterns();

  const double denom = static_cast<double>(N) + 1.0;
  AuxVolume out{Matrix(n, n), Matrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ci = static_cast<double>(patterns[i].count());
    out.volume(i, i) = (ci + 0.5) / denom;
    out.volume_not(i, i) = (static_cast<double>(N) - ci + 0.5) / denom;
    for (Eigen::Index k = i + 1; k < n; ++k) {
      const double ck = static_cast<double>(patterns[k].count());
      const double both = static_cast<double>(patterns[i].and_count(patterns[k]));
      const double neither = static_cast<double>(N) - ci - ck + both;
      out.volume(i, k) = out.volume(k, i) = (both + 0.5) / denom;
      out.volume_not(i, k) = out.volume_not(k, i) = (neither + 0.5) / denom;
    }
  }
  return out;
}

ObservedFrequency compute_observed_freq(std::span<const Token> tokens, std::size_t num_tokens) {
  if (tokens.empty()) throw std::invalid_argument("compute_observed_freq: empty token sequence");
  const auto m = static_cast<Eigen::Index>(num_tokens);
  ObservedFrequency out{Vector::Zero(m), Matrix::Zero(m, m), Vector::Zero(m)};
  for (std::size_t r = 0; r < tokens.size(); ++r) {
    if (tokens[r] >= num_tokens)
      throw std::invalid_argument("compute_observed_freq: token id " + std::to_string(tokens[r]) +
                                  " >= m=" + std::to_string(num_tokens));
    out.query_counts(static_cast<Eigen::Index>(tokens[r])) += 1.0;
    if (r + 1 < tokens.size() && tokens[r + 1] < num_tokens)
      out.markov(static_cast<Eigen::Index>(tokens[r + 1]), static_cast<Eigen::Index>(tokens[r])) += 1.0;
  }
  out.frequency = out.query_counts / static_cast<double>(tokens.size());
  for (Eigen::Index j = 0; j < m; ++j) {
    const double outgoing = out.markov.col(j).sum();
    if (outgoing > 0) out.markov.col(j) /= outgoing;
  }
  return out;
}

Vector smooth_frequency(const Vector& f, double eps) {
  Vector out = f.array() + eps;
  return out / out.sum();
}

Matrix smooth_markov(const Matrix& F, double eps) {
  Matrix out = F.array() + eps;
  for (Eigen::Index c = 0; c < out.cols(); ++c) out.col(c) /= out.col(c).sum();
  return out;
}

LeakageStats compute_leakage(const ObservationTrace& trace) {
  LeakageStats stats;
  stats.num_tokens = trace.token_count;
  stats.num_docs = static_cast<double>(trace.num_docs);
  stats.num_queries = static_cast<double>(trace.query_count);

  switch (trace.scenario) {
    case Scenario::S1:
      stats.volume = compute_observed_volume(trace.s1_patterns, trace.num_docs);
      break;
    case Scenario::S2: {
      std::vector<AccessPattern> first(trace.token_count);
      std::vector<char> seen(trace.token_count, 0);
      std::vector<Token> sequence;
      sequence.reserve(trace.s2_events.size());
      for (const auto& ev : trace.s2_events) {
        if (ev.token >= trace.token_count) throw std::invalid_argument("compute_leakage: token out of range");
        if (!seen[ev.token]) {
          first[ev.token] = ev.pattern;
          seen[ev.token] = 1;
        }
        sequence.push_back(ev.token);
      }
      stats.volume = compute_observed_volume(first, trace.num_docs);
      auto freq = compute_observed_freq(sequence, trace.token_count);
      stats.frequency = std::move(freq.frequency);
      stats.markov = std::move(freq.markov);
      stats.token_query_counts = std::move(freq.query_counts);
      break;
    }
    case Scenario::S3: {
      auto freq = compute_observed_freq(trace.s3_tokens, trace.token_count);
      stats.frequency = std::move(freq.frequency);
      stats.markov = std::move(freq.markov);
      stats.token_query_counts = std::move(freq.query_counts);
      break;
    }
  }
  return stats;
}

}  // namespace ihop
