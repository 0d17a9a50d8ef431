#include "ihop/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "ihop/attack/baselines.hpp"
#include "ihop/attack/ihop.hpp"
#include "ihop/core/io.hpp"
#include "ihop/core/random.hpp"
#include "ihop/core/simulation.hpp"
#include "ihop/core/statistics.hpp"
#include "ihop/defenses/obfuscation.hpp"
#include "ihop/defenses/osse.hpp"
#include "ihop/pancake/pancake.hpp"
#include "ihop/pipeline/corpus.hpp"
#include "ihop/pipeline/frequency.hpp"
#include "ihop/pipeline/synthetic.hpp"

namespace ihop::harness {

namespace {

// Sub-streams of a repetition seed.
enum Stream : std::uint64_t { kCorpus = 1, kUniverse, kSplit, kQueryFreq, kQueries, kSimulate, kDefense, kAttack, kChain };

std::shared_ptr<const DocumentCollection> cached_collection(const std::string& path) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const DocumentCollection>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[path];
  if (!slot) slot = std::make_shared<const DocumentCollection>(io::load_collection(path));
  return slot;
}

Matrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return io::read_matrix_csv(in);
}

Vector restrict_and_normalize(const Vector& v, const std::vector<Keyword>& keep) {
  Vector out(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) out(static_cast<Eigen::Index>(k)) = v(static_cast<Eigen::Index>(keep[k]));
  if (!(out.sum() > 0)) throw std::runtime_error("query frequencies vanish on the sampled universe");
  return out / out.sum();
}

struct Instance {
  DocumentCollection client;
  DocumentCollection aux;
  Vector freal, ftilde;   // length n
  Matrix F_real, F_tilde; // n x n, Markov query model only
};

Instance build_instance(const ExperimentSpec& spec, std::uint64_t seed) {
  Instance inst;
  const std::size_t n = spec.n;
  const bool needs_docs = spec.scenario != Scenario::S3;

  std::vector<Keyword> universe;
  std::optional<pipeline::FrequencySplit> table_split;
  if (!spec.freq_table.empty()) {
    auto table = pipeline::load_frequency_table(spec.freq_table);
    if (!spec.keywords_file.empty()) table = pipeline::align_frequency_table(table, pipeline::load_keywords(spec.keywords_file));
    table_split = pipeline::split_halves(table);
  }

  if (needs_docs) {
    std::shared_ptr<const DocumentCollection> corpus;
    if (!spec.corpus.empty()) {
      corpus = cached_collection(spec.corpus);
    } else {
      pipeline::SyntheticConfig gen;
      gen.n = spec.gen_keywords ? spec.gen_keywords : n;
      gen.num_docs = spec.gen_docs ? spec.gen_docs : spec.N_d + (spec.self_consistent ? 0 : spec.N_aux);
      gen.zipf_exponent = spec.zipf;
      gen.mixing = spec.mixing;
      gen.topics = spec.topics;
      gen.max_volume = spec.max_volume;
      corpus = std::make_shared<const DocumentCollection>(pipeline::generate_synthetic(gen, derive_seed(seed, kCorpus)));
    }
    if (corpus->num_keywords() < n) throw std::runtime_error("corpus has fewer keywords than n");
    if (table_split && static_cast<std::size_t>(table_split->freal.size()) != corpus->num_keywords())
      throw std::runtime_error("frequency table does not cover the corpus keywords");

    Rng rng(derive_seed(seed, kUniverse));
    universe = sample_without_replacement(corpus->num_keywords(), n, rng);
    std::sort(universe.begin(), universe.end());
    const auto restricted = corpus->restrict_keywords(universe);

    const std::size_t wanted = spec.N_d + (spec.self_consistent ? 0 : spec.N_aux);
    if (restricted.num_docs() < wanted)
      throw std::runtime_error("corpus has " + std::to_string(restricted.num_docs()) + " documents, need " +
                               std::to_string(wanted));
    Rng split_rng(derive_seed(seed, kSplit));
    const auto order = random_permutation(restricted.num_docs(), split_rng);
    const std::vector<std::size_t> client_ids(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(spec.N_d));
    inst.client = restricted.select_documents(client_ids);
    if (spec.self_consistent) {
      inst.aux = inst.client;
    } else {
      const std::vector<std::size_t> aux_ids(order.begin() + static_cast<std::ptrdiff_t>(spec.N_d),
                                             order.begin() + static_cast<std::ptrdiff_t>(wanted));
      inst.aux = restricted.select_documents(aux_ids);
    }
  } else {
    std::size_t available = n;
    if (table_split) available = static_cast<std::size_t>(table_split->freal.size());
    if (available < n) throw std::runtime_error("frequency table has fewer keywords than n");
    Rng rng(derive_seed(seed, kUniverse));
    universe = sample_without_replacement(available, n, rng);
    std::sort(universe.begin(), universe.end());
  }

  if (spec.scenario == Scenario::S1) return inst;

  if (spec.query_model == QueryModel::Markov) {
    if (!spec.chain.empty()) {
      inst.F_real = load_matrix(spec.chain);
      if (static_cast<std::size_t>(inst.F_real.rows()) != n || inst.F_real.cols() != inst.F_real.rows())
        throw std::runtime_error("chain must be n x n");
    } else {
      inst.F_real = pipeline::random_correlated_chain(n, derive_seed(seed, kChain), spec.chain_sharpness);
    }
    inst.F_tilde = spec.aux_chain.empty() ? inst.F_real : load_matrix(spec.aux_chain);
    if (inst.F_tilde.rows() != inst.F_real.rows() || inst.F_tilde.cols() != inst.F_real.cols())
      throw std::runtime_error("aux_chain must match the client chain");
    inst.freal = stationary_distribution(inst.F_real);
    inst.ftilde = stationary_distribution(inst.F_tilde);
  } else if (table_split) {
    inst.freal = restrict_and_normalize(table_split->freal, universe);
    inst.ftilde = restrict_and_normalize(table_split->ftilde, universe);
  } else {
    // Zipf popularity over a random ordering of the sampled keywords; the
    // adversary knows these frequencies exactly.
    const Vector z = pipeline::zipf_frequencies(n, spec.query_zipf);
    Rng rng(derive_seed(seed, kQueryFreq));
    const auto rank = random_permutation(n, rng);
    inst.freal.resize(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) inst.freal(static_cast<Eigen::Index>(k)) = z(static_cast<Eigen::Index>(rank[k]));
    inst.ftilde = inst.freal;
  }
  return inst;
}

attack::IhopConfig ihop_config(const ExperimentSpec& spec, std::uint64_t seed) {
  attack::IhopConfig cfg;
  cfg.n_iters = spec.n_iters;
  cfg.p_free = spec.p_free;
  cfg.rng_seed = derive_seed(seed, kAttack);
  cfg.coefficient_mode = spec.coefficient_mode();
  cfg.negated_complement_sign = spec.negated_complement_sign;
  cfg.rho_circ = spec.rho_circ;
  return cfg;
}

ResultRow base_row(const ExperimentSpec& spec, std::size_t rep, std::uint64_t seed) {
  ResultRow row;
  row.scenario = std::string(to_string(spec.scenario));
  row.attack = std::string(to_string(spec.attack));
  row.defense = std::string(to_string(spec.defense));
  row.n = spec.n;
  row.N_d = spec.N_d;
  row.N_aux = spec.N_aux;
  row.rho = spec.rho;
  row.n_iters = spec.n_iters;
  row.p_free = spec.p_free;
  row.alpha = spec.alpha;
  row.tpr = spec.tpr;
  row.fpr = spec.fpr;
  row.rep = rep;
  row.seed = seed;
  return row;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ResultRow run_pancake(const ExperimentSpec& spec, const Instance& inst, ResultRow row, std::uint64_t seed) {
  const Vector ones = Vector::Ones(static_cast<Eigen::Index>(spec.n));
  const bool markov = spec.query_model == QueryModel::Markov;
  const Matrix F_tilde = markov ? inst.F_tilde : Matrix(inst.ftilde * ones.transpose());

  auto state = pancake::pancake_setup(inst.freal, derive_seed(seed, kDefense));
  const auto queries = markov ? sample_queries_markov(inst.F_real, spec.rho, derive_seed(seed, kQueries))
                              : sample_queries_iid(inst.freal, spec.rho, derive_seed(seed, kQueries));
  const auto triples = pancake::pancake_run(state, queries, derive_seed(seed, kSimulate));

  const auto start = Clock::now();
  const auto result = pancake::pancake_attack(triples, smooth_markov(F_tilde), ihop_config(spec, seed));
  row.runtime_s = seconds_since(start);
  row.accuracy = pancake::pancake_accuracy(result.token_to_keyword, state);
  return row;
}

}  // namespace

std::uint64_t repetition_seed(std::uint64_t base_seed, std::size_t rep) { return derive_seed(base_seed, rep); }

ResultRow run_repetition(const ExperimentSpec& spec, std::size_t rep) {
  spec.validate();
  const std::uint64_t seed = repetition_seed(spec.base_seed, rep);
  ResultRow row = base_row(spec, rep, seed);
  const Instance inst = build_instance(spec, seed);

  if (spec.defense == DefenseKind::Pancake) return run_pancake(spec, inst, row, seed);

  const defenses::ObfuscationParams params{spec.tpr, spec.fpr};
  const bool obfuscated = spec.defense == DefenseKind::Clrz || spec.defense == DefenseKind::Osse;
  const DocumentCollection served =
      spec.defense == DefenseKind::Clrz ? defenses::clrz_apply(inst.client, params, derive_seed(seed, kDefense)) : inst.client;

  std::vector<Keyword> queries;
  if (spec.scenario != Scenario::S1)
    queries = spec.query_model == QueryModel::Markov
                  ? sample_queries_markov(inst.F_real, spec.rho, derive_seed(seed, kQueries))
                  : sample_queries_iid(inst.freal, spec.rho, derive_seed(seed, kQueries));

  SimulatedTrace sim;
  switch (spec.scenario) {
    case Scenario::S1: sim = simulate_s1(served, derive_seed(seed, kSimulate)); break;
    case Scenario::S2:
      sim = simulate_s2(served, queries, derive_seed(seed, kSimulate),
                        spec.defense == DefenseKind::Osse ? defenses::make_osse_pattern_source(served, params)
                                                          : PatternSource{});
      break;
    case Scenario::S3: sim = simulate_s3(queries, spec.n, derive_seed(seed, kSimulate)); break;
  }

  LeakageStats leakage;
  // With OSSE every query is scored on its own: the adversary clusters the
  // patterns into m groups and each query inherits its cluster's guess.
  std::vector<Keyword> scored_truth = sim.ground_truth;
  std::vector<std::size_t> cluster_of_query;
  if (spec.defense == DefenseKind::Osse) {
    const auto& events = sim.trace.s2_events;
    std::vector<AccessPattern> patterns;
    patterns.reserve(events.size());
    scored_truth.clear();
    for (const auto& e : events) {
      patterns.push_back(e.pattern);
      scored_truth.push_back(sim.ground_truth[e.token]);
    }
    const std::size_t m = sim.trace.token_count;
    const auto clusters = defenses::osse_cluster(patterns, m);
    cluster_of_query.assign(patterns.size(), 0);
    Vector sizes(static_cast<Eigen::Index>(m));
    for (std::size_t c = 0; c < m; ++c) {
      for (std::size_t q : clusters[c]) cluster_of_query[q] = c;
      sizes(static_cast<Eigen::Index>(c)) = static_cast<double>(clusters[c].size());
    }
    leakage.volume = defenses::osse_observed_volume(patterns, clusters, served.num_docs());
    leakage.frequency = sizes / sizes.sum();
    leakage.num_docs = static_cast<double>(served.num_docs());
    leakage.num_queries = static_cast<double>(patterns.size());
    leakage.num_tokens = m;
  } else {
    leakage = compute_leakage(sim.trace);
  }

  AuxStats aux;
  aux.num_keywords = spec.n;
  if (spec.scenario != Scenario::S3) {
    auto vol = compute_aux_volume(inst.aux);
    aux.volume = obfuscated ? defenses::clrz_expected_volume(vol.volume, vol.volume_not, params) : vol.volume;
    aux.volume_not = std::move(vol.volume_not);
  }
  if (spec.scenario != Scenario::S1) aux.frequency = smooth_frequency(inst.ftilde);
  if (spec.query_model == QueryModel::Markov && spec.scenario != Scenario::S1) aux.markov = smooth_markov(inst.F_tilde);

  std::vector<Keyword> predicted;
  const auto start = Clock::now();
  switch (spec.attack) {
    case AttackKind::Ihop:
      predicted = attack::ihop_run(leakage, aux, ihop_config(spec, seed)).token_to_keyword();
      break;
    case AttackKind::Sap: predicted = attack::sap_attack(leakage, aux, spec.alpha).token_to_keyword(); break;
    case AttackKind::Freq: predicted = attack::freq_attack(leakage.frequency, aux.frequency); break;
    case AttackKind::Ikk: {
      attack::IkkConfig cfg;
      cfg.T0 = spec.ikk_T0;
      cfg.cooling = spec.ikk_cooling;
      cfg.T_min = spec.ikk_T_min;
      cfg.rng_seed = derive_seed(seed, kAttack);
      predicted = attack::ikk_attack(leakage.volume, aux.volume, cfg).assignment.token_to_keyword();
      break;
    }
  }
  row.runtime_s = seconds_since(start);

  if (!cluster_of_query.empty()) {
    std::vector<Keyword> per_query(cluster_of_query.size());
    for (std::size_t q = 0; q < per_query.size(); ++q) per_query[q] = predicted[cluster_of_query[q]];
    predicted = std::move(per_query);
  }
  row.accuracy = accuracy(predicted, scored_truth);
  return row;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<ResultRow> rows(spec.repetitions);
  const std::size_t workers = std::min(spec.threads, spec.repetitions);
  if (workers <= 1) {
    for (std::size_t r = 0; r < spec.repetitions; ++r) rows[r] = run_repetition(spec, r);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t r = next++; r < spec.repetitions; r = next++) {
        try {
          rows[r] = run_repetition(spec, r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

void run_all(const std::vector<ExperimentSpec>& configurations,
             const std::function<void(const ResultRow&)>& sink) {
  for (const auto& spec : configurations)
    for (const auto& row : run_experiment(spec)) sink(row);
}

}  // namespace ihop::harness
