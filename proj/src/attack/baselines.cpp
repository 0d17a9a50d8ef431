#include "ihop/attack/baselines.hpp"

#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "ihop/attack/ihop.hpp"
#include "ihop/core/random.hpp"

namespace ihop::attack {

ProviderPtr sap_provider(const LeakageStats& leakage, const AuxStats& aux, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("sap: alpha must lie in [0,1]");
  std::vector<ProviderPtr> parts;
  const bool use_freq = alpha > 0.0 && leakage.num_queries > 0;
  const bool use_volume = alpha < 1.0;
  if (use_volume) {
    if (!leakage.has_volume() || !aux.has_volume() || !(leakage.num_docs > 0))
      throw std::invalid_argument("sap: volume term needs observed and auxiliary volumes and N_d");
    auto volume = std::make_shared<VolumeCoefficients>(leakage.volume, aux.volume, leakage.num_docs);
    parts.push_back(std::make_shared<ScaledCoefficients>(
        std::make_shared<LinearOnlyCoefficients>(volume), (1.0 - alpha) / leakage.num_docs));
  }
  if (use_freq) {
    if (!leakage.has_frequency() || !aux.has_frequency())
      throw std::invalid_argument("sap: frequency term needs observed and auxiliary frequencies");
    auto freq = std::make_shared<FrequencyCoefficients>(leakage.frequency, aux.frequency,
                                                        leakage.num_queries);
    parts.push_back(std::make_shared<ScaledCoefficients>(
        freq, alpha / std::max(leakage.num_queries, 1.0)));
  }
  if (parts.empty()) throw std::invalid_argument("sap: no usable term (alpha = 1 without queries)");
  return combine_additive(std::move(parts));
}

Assignment sap_attack(const LeakageStats& leakage, const AuxStats& aux, double alpha) {
  const auto provider = sap_provider(leakage, aux, alpha);
  IhopConfig config;
  config.n_iters = 0;
  return ihop_run(*provider, config);
}

std::vector<Keyword> freq_attack(const Vector& f, const Vector& ftilde) {
  if (ftilde.size() == 0) throw std::invalid_argument("freq_attack: empty auxiliary frequencies");
  std::vector<Keyword> out(static_cast<std::size_t>(f.size()));
  for (Eigen::Index j = 0; j < f.size(); ++j) {
    Eigen::Index best = 0;
    double best_gap = std::abs(f(j) - ftilde(0));
    for (Eigen::Index i = 1; i < ftilde.size(); ++i) {
      const double gap = std::abs(f(j) - ftilde(i));
      if (gap < best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    out[static_cast<std::size_t>(j)] = static_cast<Keyword>(best);
  }
  return out;
}

void IkkConfig::validate() const {
  if (!(cooling > 0.0 && cooling < 1.0)) throw std::invalid_argument("IkkConfig: cooling must lie in (0,1)");
  if (!(T_min > 0.0 && T_min < T0)) throw std::invalid_argument("IkkConfig: need 0 < T_min < T0");
}

double ikk_objective(const Matrix& V, const Matrix& Vtilde, const Assignment& assignment) {
  const auto m = static_cast<Eigen::Index>(assignment.size());
  double cross = 0;
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) {
      const auto ka = static_cast<Eigen::Index>(assignment[static_cast<Token>(a)]);
      const auto kb = static_cast<Eigen::Index>(assignment[static_cast<Token>(b)]);
      cross += V(a, b) * Vtilde(ka, kb);
    }
  return Vtilde.squaredNorm() + V.squaredNorm() - 2.0 * cross;
}

namespace {

// Sum over pairs touching `changed` of V(j,j') Vt(p(j), p(j')), each pair once.
double touched_overlap(const Matrix& V, const Matrix& Vt, const std::vector<Keyword>& p,
                       std::span<const Token> changed) {
  double total = 0;
  const auto m = static_cast<Eigen::Index>(p.size());
  for (Token t : changed) {
    const auto ti = static_cast<Eigen::Index>(t);
    const auto kt = static_cast<Eigen::Index>(p[t]);
    for (Eigen::Index j = 0; j < m; ++j)
      total += 2.0 * V(ti, j) * Vt(kt, static_cast<Eigen::Index>(p[static_cast<std::size_t>(j)]));
  }
  for (Token t : changed)
    for (Token u : changed)
      total -= V(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(u)) *
               Vt(static_cast<Eigen::Index>(p[t]), static_cast<Eigen::Index>(p[u]));
  return total;
}

}  // namespace

IkkResult ikk_attack(const Matrix& V, const Matrix& Vtilde, const IkkConfig& config) {
  return ikk_attack(V, Vtilde, config, std::nullopt);
}

IkkResult ikk_attack(const Matrix& V, const Matrix& Vtilde, const IkkConfig& config,
                     const std::optional<Assignment>& start) {
  config.validate();
  const auto m = static_cast<std::size_t>(V.rows());
  const auto n = static_cast<std::size_t>(Vtilde.rows());
  if (V.rows() != V.cols() || Vtilde.rows() != Vtilde.cols())
    throw std::invalid_argument("ikk_attack: volume matrices must be square");
  if (m > n) throw std::invalid_argument("ikk_attack: more tokens than keywords");

  Rng rng(config.rng_seed);
  auto perm = random_permutation(n, rng);
  std::vector<Keyword> p(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(m));
  if (start) {
    if (start->size() != m || !start->is_injective(n))
      throw std::invalid_argument("ikk_attack: start state must be an injective map of every token");
    p = start->token_to_keyword();
  }
  std::vector<std::ptrdiff_t> holder(n, -1);
  for (Token t = 0; t < m; ++t) holder[p[t]] = static_cast<std::ptrdiff_t>(t);

  IkkResult result;
  double energy = ikk_objective(V, Vtilde, Assignment(p));
  result.initial_objective = energy;
  result.objective = energy;
  result.assignment = Assignment(p);
  if (m == 0 || n < 2) return result;

  double best = energy;
  std::vector<Token> changed;
  for (double T = config.T0; T >= config.T_min; T *= config.cooling) {
    ++result.steps;
    const Token t = uniform_index(rng, m);
    Keyword k = uniform_index(rng, n - 1);
    if (k >= p[t]) ++k;
    const std::ptrdiff_t other = holder[k];

    changed.assign(1, t);
    if (other >= 0) changed.push_back(static_cast<Token>(other));
    const double before = touched_overlap(V, Vtilde, p, changed);
    const Keyword old = p[t];
    p[t] = k;
    if (other >= 0) p[static_cast<Token>(other)] = old;
    const double delta = -2.0 * (touched_overlap(V, Vtilde, p, changed) - before);

    if (delta <= 0.0 || uniform01(rng) < std::exp(-delta / T)) {
      energy += delta;
      holder[k] = static_cast<std::ptrdiff_t>(t);
      holder[old] = other;
      if (energy < best) {
        best = energy;
        result.assignment = Assignment(p);
      }
    } else {
      p[t] = old;
      if (other >= 0) p[static_cast<Token>(other)] = k;
    }
  }
  // Report the exact objective of the returned state, free of accumulated drift.
  result.objective = ikk_objective(V, Vtilde, result.assignment);
  return result;
}

}  // namespace ihop::attack
