#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ihop/attack/ihop.hpp"
#include "ihop/core/random.hpp"
#include "ihop/core/types.hpp"

namespace ihop::pancake {

struct PendingQuery {
  Keyword keyword;
  std::size_t real_index;  // position in the client's query stream
};

/// Replication layout and query buffer. Keyword index n is the dummy keyword.
struct PancakeState {
  std::size_t n = 0;
  std::vector<std::size_t> replica_counts;        // R(i), length n + 1
  std::vector<Keyword> replica_to_keyword;        // nu, length 2n, values in [0, n]
  std::vector<std::vector<std::size_t>> replicas; // inverse of nu
  Vector f_real;                                  // length n + 1, last entry 0
  Vector f_dum;                                   // length n + 1
  DiscreteSampler real_sampler;
  DiscreteSampler dummy_sampler;
  std::deque<PendingQuery> pending;
  std::size_t next_real_index = 0;

  std::size_t num_replicas() const { return 2 * n; }
  Keyword dummy_keyword() const { return n; }
};

/// R(i) = max(1, ceil(n f_i)), dummies fill the remaining replicas up to 2n,
/// f_dum(i) = R(i)/n - f_i. With a seed the replica slots are shuffled;
/// without one, keyword 0 owns the first R(0) slots, keyword 1 the next, and so on.
///
/// Throws std::invalid_argument if f_real is not a distribution or the
/// replica budget sum R(i) <= 2n is exceeded.
PancakeState pancake_setup(const Vector& f_real, std::optional<std::uint64_t> shuffle_seed = std::nullopt);

enum class SlotSource { Real, RealFake, Dummy };

struct SlotDraw {
  std::size_t token = 0;    // replica id
  Keyword keyword = 0;
  SlotSource source = SlotSource::Real;
  std::size_t real_index = 0;  // meaningful for SlotSource::Real only
};

using Triple = std::array<SlotDraw, 3>;

/// Buffers `next_keyword`, then fills three slots. Each slot flips a fair
/// coin: heads pops the buffer (or draws a fake real query from f_real when
/// the buffer is empty); tails draws from f_dum. The chosen keyword is sent
/// to one of its replicas uniformly at random.
Triple pancake_query_step(PancakeState& state, Keyword next_keyword, Rng& rng);

struct PancakeTrace {
  PancakeState state;
  std::vector<Keyword> client_queries;
  std::vector<Triple> triples;
};

/// Runs a client query stream through the protocol, one triple per query.
std::vector<Triple> pancake_run(PancakeState& state, std::span<const Keyword> queries, std::uint64_t seed);

/// Markov client with chain `F_real`, f_real = its stationary distribution.
PancakeTrace pancake_simulate(const Matrix& F_real, std::size_t rho, std::uint64_t seed);

struct ObservedReplicaStats {
  Matrix markov;        // 2n x 2n, columns normalized where nonzero
  Vector query_counts;  // raw column masses
};

/// Counts every (token in triple r) -> (token in triple r + 1) pair.
ObservedReplicaStats pancake_observed_F(std::span<const Triple> triples, std::size_t num_replicas);

struct ExpectedReplicaModel {
  Matrix G;       // (n+1) x (n+1) keyword-level transition matrix
  Matrix F_hat;   // 2n x 2n replica-level matrix
  PancakeState predicted;
};

/// Expected transitions between tokens of consecutive triples when the
/// client follows `F_tilde`. The dummy keyword contributes a zero row to the
/// padded chain and its column is the stationary profile.
ExpectedReplicaModel pancake_expected_F(const Matrix& F_tilde);

struct PancakeAttackResult {
  Assignment token_to_replica;
  std::vector<Keyword> token_to_keyword;  // predicted nu applied to the replica guess
};

/// IHOP in Markov mode over the 2n tokens against the expected replica matrix.
PancakeAttackResult pancake_attack(std::span<const Triple> triples, const Matrix& F_tilde,
                                   const attack::IhopConfig& config);

/// Fraction of the 2n tokens whose predicted keyword equals nu(token).
double pancake_accuracy(std::span<const Keyword> predicted, const PancakeState& truth);

/// Expected accuracy of a uniformly random token -> replica bijection.
double pancake_chance_accuracy(const PancakeState& truth, const PancakeState& predicted);

void write_triples_csv(std::ostream& out, std::span<const Triple> triples);
/// Reads `step,slot,token_id`; only tokens are restored.
std::vector<Triple> read_triples_csv(std::istream& in);

}  // namespace ihop::pancake
