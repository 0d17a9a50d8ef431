#include "ihop/attack/ihop.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ihop/core/random.hpp"
#include "ihop/core/simulation.hpp"
#include "ihop/lap/lap.hpp"

namespace ihop::attack {

std::string_view to_string(CoefficientMode mode) {
  switch (mode) {
    case CoefficientMode::Volume: return "volume";
    case CoefficientMode::FreqIid: return "freq_iid";
    case CoefficientMode::Markov: return "markov";
    case CoefficientMode::VolumeFreqIid: return "volume+freq_iid";
    case CoefficientMode::Pancake: return "pancake";
  }
  return "?";
}

CoefficientMode parse_coefficient_mode(std::string_view text) {
  for (auto mode : {CoefficientMode::Volume, CoefficientMode::FreqIid, CoefficientMode::Markov,
                    CoefficientMode::VolumeFreqIid, CoefficientMode::Pancake})
    if (text == to_string(mode)) return mode;
  throw std::invalid_argument("unknown coefficient mode '" + std::string(text) + "'");
}

void IhopConfig::validate() const {
  if (!(p_free > 0.0 && p_free < 1.0))
    throw std::invalid_argument("IhopConfig: p_free must lie in (0,1), got " + std::to_string(p_free));
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("ihop: coefficient mode needs ") + what);
}

ProviderPtr volume_provider(const LeakageStats& leakage, const AuxStats& aux, const IhopConfig& config) {
  require(leakage.has_volume(), "observed volumes");
  require(aux.has_volume(), "auxiliary volumes");
  require(leakage.num_docs > 0, "N_d");
  return std::make_shared<VolumeCoefficients>(
      leakage.volume, aux.volume, leakage.num_docs,
      config.negated_complement_sign ? VolumeSign::NegatedComplement : VolumeSign::Likelihood);
}

ProviderPtr frequency_provider(const LeakageStats& leakage, const AuxStats& aux) {
  require(leakage.has_frequency(), "observed frequencies");
  require(aux.has_frequency(), "auxiliary frequencies");
  require(leakage.num_queries > 0, "rho > 0");
  return std::make_shared<FrequencyCoefficients>(leakage.frequency, aux.frequency, leakage.num_queries);
}

ProviderPtr markov_provider(const LeakageStats& leakage, const AuxStats& aux, const IhopConfig& config) {
  require(leakage.has_markov(), "the observed Markov matrix");
  require(leakage.token_query_counts.size() == leakage.markov.rows(), "per-token query counts");
  require(aux.has_markov(), "the auxiliary Markov matrix");
  Vector weights = aux.markov_weights.size() == aux.markov.rows() ? aux.markov_weights
                                                                  : stationary_distribution(aux.markov);
  return std::make_shared<MarkovCoefficients>(leakage.markov, leakage.token_query_counts, aux.markov,
                                              std::move(weights), config.rho_circ);
}

}  // namespace

ProviderPtr make_provider(const LeakageStats& leakage, const AuxStats& aux, const IhopConfig& config) {
  switch (config.coefficient_mode) {
    case CoefficientMode::Volume: return volume_provider(leakage, aux, config);
    case CoefficientMode::FreqIid: return frequency_provider(leakage, aux);
    case CoefficientMode::Markov:
    case CoefficientMode::Pancake: return markov_provider(leakage, aux, config);
    case CoefficientMode::VolumeFreqIid:
      return combine_additive({volume_provider(leakage, aux, config), frequency_provider(leakage, aux)});
  }
  throw std::invalid_argument("ihop: unknown coefficient mode");
}

std::vector<Keyword> solve_linear_step(std::span<const Keyword> free_kws,
                                       std::span<const Token> free_toks,
                                       std::span<const FixedPair> fixed,
                                       const CoefficientProvider& provider) {
  if (free_kws.size() < free_toks.size())
    throw std::invalid_argument("solve_linear_step: fewer free keywords than free tokens");
  Matrix cost = provider.linear_costs(free_kws, free_toks);
  if (!fixed.empty()) cost += provider.fixed_pair_costs(free_kws, free_toks, fixed);
  const auto sol = lap::solve_lap_min(cost);
  std::vector<Keyword> out(free_toks.size());
  for (std::size_t b = 0; b < free_toks.size(); ++b) out[b] = free_kws[sol.col_to_row[b]];
  return out;
}

Assignment ihop_run(const CoefficientProvider& provider, const IhopConfig& config,
                    const IterationCallback& on_iteration) {
  config.validate();
  const std::size_t n = provider.num_keywords();
  const std::size_t m = provider.num_tokens();
  if (m > n)
    throw std::invalid_argument("ihop: more tokens (" + std::to_string(m) + ") than keywords (" +
                                std::to_string(n) + ")");

  std::vector<Keyword> all_kws(n);
  std::iota(all_kws.begin(), all_kws.end(), Keyword{0});
  std::vector<Token> all_toks(m);
  std::iota(all_toks.begin(), all_toks.end(), Token{0});

  Assignment current(solve_linear_step(all_kws, all_toks, {}, provider));
  if (on_iteration) on_iteration(0, current);
  if (m == 0) return current;

  const auto free_count = static_cast<std::size_t>(std::ceil(config.p_free * static_cast<double>(m)));
  Rng rng(config.rng_seed);
  std::vector<char> token_free(m), keyword_fixed(n);
  std::vector<Token> free_toks;
  std::vector<Keyword> free_kws;
  std::vector<FixedPair> fixed;

  for (std::size_t iter = 1; iter <= config.n_iters; ++iter) {
    free_toks = sample_without_replacement(m, free_count, rng);
    std::fill(token_free.begin(), token_free.end(), 0);
    for (Token t : free_toks) token_free[t] = 1;

    fixed.clear();
    std::fill(keyword_fixed.begin(), keyword_fixed.end(), 0);
    for (Token t = 0; t < m; ++t) {
      if (token_free[t]) continue;
      fixed.push_back({t, current[t]});
      keyword_fixed[current[t]] = 1;
    }
    free_kws.clear();
    for (Keyword k = 0; k < n; ++k)
      if (!keyword_fixed[k]) free_kws.push_back(k);

    const auto block = solve_linear_step(free_kws, free_toks, fixed, provider);
    for (std::size_t b = 0; b < free_toks.size(); ++b) current[free_toks[b]] = block[b];
    if (on_iteration) on_iteration(iter, current);
  }
  return current;
}

Assignment ihop_run(const LeakageStats& leakage, const AuxStats& aux, const IhopConfig& config,
                    const IterationCallback& on_iteration) {
  config.validate();
  const auto provider = make_provider(leakage, aux, config);
  return ihop_run(*provider, config, on_iteration);
}

}  // namespace ihop::attack
