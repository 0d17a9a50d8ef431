#include "ihop/pancake/pancake.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ihop/core/simulation.hpp"

namespace ihop::pancake {

PancakeState pancake_setup(const Vector& f_real, std::optional<std::uint64_t> shuffle_seed) {
  const auto n = static_cast<std::size_t>(f_real.size());
  if (n == 0) throw std::invalid_argument("pancake_setup: empty frequency vector");
  if ((f_real.array() < 0.0).any() || std::abs(f_real.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("pancake_setup: f_real must be a probability vector");

  PancakeState s;
  s.n = n;
  s.replica_counts.assign(n + 1, 0);
  std::size_t used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double scaled = static_cast<double>(n) * f_real(static_cast<Eigen::Index>(i));
    // The slack keeps n * f_i = 2 + 1ulp from costing an extra replica.
    const auto r = static_cast<std::size_t>(std::ceil(scaled - 1e-9));
    s.replica_counts[i] = std::max<std::size_t>(1, r);
    used += s.replica_counts[i];
  }
  if (used > 2 * n)
    throw std::invalid_argument("pancake_setup: replica budget exceeded (" + std::to_string(used) +
                                " > " + std::to_string(2 * n) + ")");
  s.replica_counts[n] = 2 * n - used;

  s.f_real = Vector::Zero(static_cast<Eigen::Index>(n + 1));
  s.f_real.head(static_cast<Eigen::Index>(n)) = f_real;
  s.f_dum.resize(static_cast<Eigen::Index>(n + 1));
  for (std::size_t i = 0; i <= n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    s.f_dum(ii) = std::max(0.0, static_cast<double>(s.replica_counts[i]) / static_cast<double>(n) - s.f_real(ii));
  }

  s.replica_to_keyword.reserve(2 * n);
  for (std::size_t i = 0; i <= n; ++i)
    s.replica_to_keyword.insert(s.replica_to_keyword.end(), s.replica_counts[i], i);
  if (shuffle_seed) {
    Rng rng(*shuffle_seed);
    fisher_yates(std::span<Keyword>(s.replica_to_keyword), rng);
  }
  s.replicas.assign(n + 1, {});
  for (std::size_t r = 0; r < 2 * n; ++r) s.replicas[s.replica_to_keyword[r]].push_back(r);

  s.real_sampler = DiscreteSampler(s.f_real);
  s.dummy_sampler = DiscreteSampler(s.f_dum);
  return s;
}

Triple pancake_query_step(PancakeState& state, Keyword next_keyword, Rng& rng) {
  if (next_keyword >= state.n) throw std::invalid_argument("pancake_query_step: keyword out of range");
  state.pending.push_back({next_keyword, state.next_real_index++});
  Triple out;
  for (auto& slot : out) {
    if (bernoulli(rng, 0.5)) {
      if (!state.pending.empty()) {
        slot.keyword = state.pending.front().keyword;
        slot.real_index = state.pending.front().real_index;
        slot.source = SlotSource::Real;
        state.pending.pop_front();
      } else {
        slot.keyword = state.real_sampler(rng);
        slot.source = SlotSource::RealFake;
      }
    } else {
      slot.keyword = state.dummy_sampler(rng);
      slot.source = SlotSource::Dummy;
    }
    const auto& owned = state.replicas[slot.keyword];
    slot.token = owned[uniform_index(rng, owned.size())];
  }
  return out;
}

std::vector<Triple> pancake_run(PancakeState& state, std::span<const Keyword> queries, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Triple> out;
  out.reserve(queries.size());
  for (Keyword q : queries) out.push_back(pancake_query_step(state, q, rng));
  return out;
}

PancakeTrace pancake_simulate(const Matrix& F_real, std::size_t rho, std::uint64_t seed) {
  PancakeTrace trace;
  trace.state = pancake_setup(stationary_distribution(F_real), derive_seed(seed, 0));
  trace.client_queries = sample_queries_markov(F_real, rho, derive_seed(seed, 1));
  trace.triples = pancake_run(trace.state, trace.client_queries, derive_seed(seed, 2));
  return trace;
}

ObservedReplicaStats pancake_observed_F(std::span<const Triple> triples, std::size_t num_replicas) {
  const auto m = static_cast<Eigen::Index>(num_replicas);
  Matrix counts = Matrix::Zero(m, m);
  for (std::size_t r = 0; r + 1 < triples.size(); ++r)
    for (const auto& from : triples[r])
      for (const auto& to : triples[r + 1]) {
        if (from.token >= num_replicas || to.token >= num_replicas)
          throw std::invalid_argument("pancake_observed_F: token id out of range");
        counts(static_cast<Eigen::Index>(to.token), static_cast<Eigen::Index>(from.token)) += 1.0;
      }
  ObservedReplicaStats out;
  out.query_counts = counts.colwise().sum().transpose();
  out.markov = counts;
  for (Eigen::Index j = 0; j < m; ++j)
    if (out.query_counts(j) > 0) out.markov.col(j) /= out.query_counts(j);
  return out;
}

ExpectedReplicaModel pancake_expected_F(const Matrix& F_tilde) {
  const auto n = F_tilde.rows();
  if (n == 0 || F_tilde.cols() != n) throw std::invalid_argument("pancake_expected_F: need a square chain");
  const Vector f = stationary_distribution(F_tilde);

  ExpectedReplicaModel out;
  out.predicted = pancake_setup(f);

  Matrix chain = Matrix::Zero(n + 1, n + 1);
  chain.topLeftCorner(n, n) = F_tilde;
  chain.col(n).head(n) = f;
  const Matrix chain2 = chain * chain;
  const Matrix chain3 = chain2 * chain;
  const Vector ones = Vector::Ones(n + 1);
  out.G = 0.105 * (0.81 * chain + 0.17 * chain2 + 0.02 * chain3) +
          0.395 * out.predicted.f_real * ones.transpose() + 0.5 * out.predicted.f_dum * ones.transpose();

  const auto m = static_cast<Eigen::Index>(out.predicted.num_replicas());
  const auto& nu = out.predicted.replica_to_keyword;
  out.F_hat.resize(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto kj = static_cast<Eigen::Index>(nu[static_cast<std::size_t>(j)]);
    const auto r = static_cast<double>(out.predicted.replica_counts[static_cast<std::size_t>(kj)]);
    for (Eigen::Index jp = 0; jp < m; ++jp)
      out.F_hat(j, jp) = out.G(kj, static_cast<Eigen::Index>(nu[static_cast<std::size_t>(jp)])) / r;
  }
  return out;
}

PancakeAttackResult pancake_attack(std::span<const Triple> triples, const Matrix& F_tilde,
                                   const attack::IhopConfig& config) {
  const auto model = pancake_expected_F(F_tilde);
  const std::size_t m = model.predicted.num_replicas();
  const auto observed = pancake_observed_F(triples, m);

  LeakageStats leakage;
  leakage.markov = observed.markov;
  leakage.token_query_counts = observed.query_counts;
  leakage.num_tokens = m;
  leakage.num_queries = static_cast<double>(3 * triples.size());

  AuxStats aux;
  aux.markov = model.F_hat;
  aux.markov_weights = stationary_distribution(model.F_hat);
  aux.num_keywords = m;

  attack::IhopConfig cfg = config;
  cfg.coefficient_mode = attack::CoefficientMode::Pancake;
  PancakeAttackResult out;
  out.token_to_replica = attack::ihop_run(leakage, aux, cfg);
  out.token_to_keyword.resize(m);
  for (Token t = 0; t < m; ++t)
    out.token_to_keyword[t] = model.predicted.replica_to_keyword[out.token_to_replica[t]];
  return out;
}

double pancake_accuracy(std::span<const Keyword> predicted, const PancakeState& truth) {
  return accuracy(predicted, truth.replica_to_keyword);
}

double pancake_chance_accuracy(const PancakeState& truth, const PancakeState& predicted) {
  if (truth.n != predicted.n) throw std::invalid_argument("pancake_chance_accuracy: size mismatch");
  double hits = 0;
  for (std::size_t i = 0; i <= truth.n; ++i)
    hits += static_cast<double>(truth.replica_counts[i] * predicted.replica_counts[i]);
  const auto total = static_cast<double>(truth.num_replicas());
  return hits / (total * total);
}

void write_triples_csv(std::ostream& out, std::span<const Triple> triples) {
  out << "step,slot,token_id\n";
  for (std::size_t r = 0; r < triples.size(); ++r)
    for (std::size_t s = 0; s < 3; ++s) out << r << ',' << s << ',' << triples[r][s].token << '\n';
}

std::vector<Triple> read_triples_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "step,slot,token_id")
    throw std::runtime_error("read_triples_csv: missing header 'step,slot,token_id'");
  std::vector<Triple> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::size_t step = 0, slot = 0, token = 0;
    char c1 = 0, c2 = 0;
    if (!(row >> step >> c1 >> slot >> c2 >> token) || c1 != ',' || c2 != ',' || slot > 2)
      throw std::runtime_error("read_triples_csv: malformed line " + std::to_string(lineno));
    if (step >= out.size()) {
      if (step != out.size()) throw std::runtime_error("read_triples_csv: steps out of order at line " + std::to_string(lineno));
      out.emplace_back();
    }
    out[step][slot].token = token;
  }
  return out;
}

}  // namespace ihop::pancake
