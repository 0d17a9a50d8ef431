#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ihop {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Keywords and tokens are dense indices; tokens never encode their keyword.
using Keyword = std::size_t;
using Token = std::size_t;

enum class Scenario { S1, S2, S3 };

std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view text);

/// Fixed-length bit vector with word-level population counts.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size);

  std::size_t size() const { return size_; }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool value = true);

  std::size_t count() const;
  // Population count of the intersection; sizes must match.
  std::size_t and_count(const BitVector& other) const;
  std::size_t or_count(const BitVector& other) const;

  std::span<const std::uint64_t> words() const { return words_; }

  bool operator==(const BitVector&) const = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Bit ℓ is set iff document ℓ is returned for the query.
using AccessPattern = BitVector;

/// Documents as keyword-index sets over a universe of `num_keywords` keywords.
class DocumentCollection {
 public:
  DocumentCollection() = default;
  /// Sorts and deduplicates each document; throws if any index is out of range.
  DocumentCollection(std::size_t num_keywords, std::vector<std::vector<Keyword>> documents);

  std::size_t num_docs() const { return documents_.size(); }
  std::size_t num_keywords() const { return num_keywords_; }
  std::span<const Keyword> document(std::size_t d) const { return documents_[d]; }
  const std::vector<std::vector<Keyword>>& documents() const { return documents_; }

  /// Keyword-major view: one bitset of length num_docs() per keyword.
  std::vector<BitVector> keyword_patterns() const;
  std::vector<std::size_t> keyword_counts() const;

  /// Keeps only the listed documents, in the given order.
  DocumentCollection select_documents(std::span<const std::size_t> doc_ids) const;
  /// Keeps only the listed keywords; keyword `keywords[k]` becomes index k.
  DocumentCollection restrict_keywords(std::span<const Keyword> keywords) const;

  bool operator==(const DocumentCollection&) const = default;

 private:
  std::size_t num_keywords_ = 0;
  std::vector<std::vector<Keyword>> documents_;
};

struct QueryEvent {
  Token token = 0;
  AccessPattern pattern;
};

/// What the adversary sees. Only the field matching `scenario` is populated.
struct ObservationTrace {
  Scenario scenario = Scenario::S1;
  std::vector<AccessPattern> s1_patterns;
  std::vector<QueryEvent> s2_events;
  std::vector<Token> s3_tokens;
  std::size_t token_count = 0;  // m
  std::size_t query_count = 0;  // rho
  std::size_t num_docs = 0;     // N_d (0 in S3)
};

/// A trace plus the token -> keyword map the simulator used (kept for scoring).
struct SimulatedTrace {
  ObservationTrace trace;
  std::vector<Keyword> ground_truth;
};

/// Statistics the adversary derives from an ObservationTrace. Empty matrices mean "not leaked".
struct LeakageStats {
  Matrix volume;              // V, m x m
  Vector frequency;           // f, length m
  Matrix markov;              // F, m x m, column j' = distribution of the successor of j'
  Vector token_query_counts;  // rho(tau_j); in Markov use, column masses of F's counts
  double num_docs = 0;
  double num_queries = 0;
  std::size_t num_tokens = 0;

  bool has_volume() const { return volume.size() > 0; }
  bool has_frequency() const { return frequency.size() > 0; }
  bool has_markov() const { return markov.size() > 0; }
};

/// Auxiliary keyword statistics; every populated entry lies strictly inside (0,1).
struct AuxStats {
  Matrix volume;      // Vtilde
  Matrix volume_not;  // Vtilde^NOT
  Vector frequency;   // ftilde
  Matrix markov;      // Ftilde, column-stochastic
  // Keyword-side weights used for the free-keyword aggregate of the Markov
  // coefficients; defaults to the stationary distribution of `markov`.
  Vector markov_weights;
  std::size_t num_keywords = 0;

  bool has_volume() const { return volume.size() > 0; }
  bool has_frequency() const { return frequency.size() > 0; }
  bool has_markov() const { return markov.size() > 0; }
};

/// Injective token -> keyword map.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::vector<Keyword> token_to_keyword)
      : map_(std::move(token_to_keyword)) {}

  std::size_t size() const { return map_.size(); }
  Keyword operator[](Token t) const { return map_[t]; }
  Keyword& operator[](Token t) { return map_[t]; }
  const std::vector<Keyword>& token_to_keyword() const { return map_; }

  bool is_injective(std::size_t num_keywords) const;

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<Keyword> map_;
};

}  // namespace ihop
