#pragma once

// Brute-force likelihood oracles for the coefficient families. Each check
// builds a random micro-instance, solves the LAP the provider constructs and
// compares it with an exhaustive search over injective maps that scores full
// binomial or Poisson log-pmfs.
//
// Poisson instances are square with equal per-token query counts where the
// rate terms would otherwise depend on the assignment; binomial instances use
// integer success counts.

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "ihop/attack/coefficients.hpp"
#include "ihop/core/random.hpp"
#include "ihop/core/simulation.hpp"
#include "ihop/lap/lap.hpp"

namespace oracle {

using ihop::Keyword;
using ihop::Matrix;
using ihop::Rng;
using ihop::Token;
using ihop::Vector;

inline double log_binom_pmf(double k, double N, double p) {
  return std::lgamma(N + 1) - std::lgamma(k + 1) - std::lgamma(N - k + 1) + k * std::log(p) +
         (N - k) * std::log1p(-p);
}

inline double log_pois_pmf(double k, double lambda) {
  return k * std::log(lambda) - lambda - std::lgamma(k + 1);
}

// Calls f(map) for every injective map [m] -> [n].
inline void for_each_injection(std::size_t m, std::size_t n,
                               const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> map(m);
  std::vector<bool> used(n, false);
  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    if (pos == m) {
      f(map);
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      used[i] = true;
      map[pos] = i;
      rec(pos + 1);
      used[i] = false;
    }
  };
  rec(0);
}

struct Outcome {
  bool agree = false;
  double lap_nll = 0;     // oracle score of the LAP's map
  double oracle_nll = 0;  // exhaustive minimum
};

// Brute-force argmin of `nll` over injective maps of `m` items into `n`; the
// LAP map agrees when it attains the minimum (exact ties are allowed).
inline Outcome compare(const Matrix& lap_cost, std::size_t m, std::size_t n,
                       const std::function<double(const std::vector<std::size_t>&)>& nll) {
  const auto sol = ihop::lap::solve_lap_min(lap_cost);
  Outcome out;
  out.lap_nll = nll(sol.col_to_row);
  out.oracle_nll = std::numeric_limits<double>::infinity();
  for_each_injection(m, n, [&](const std::vector<std::size_t>& map) {
    out.oracle_nll = std::min(out.oracle_nll, nll(map));
  });
  out.agree = out.lap_nll <= out.oracle_nll + 1e-9 * (1 + std::abs(out.oracle_nll));
  return out;
}

inline std::vector<std::size_t> iota(std::size_t k) {
  std::vector<std::size_t> v(k);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

inline double unif(Rng& rng, double lo, double hi) { return lo + (hi - lo) * ihop::uniform01(rng); }

// Symmetric matrix of probabilities in (lo, hi).
inline Matrix random_sym_prob(std::size_t n, Rng& rng, double lo = 0.02, double hi = 0.98) {
  Matrix P(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i; k < n; ++k) P(i, k) = P(k, i) = unif(rng, lo, hi);
  return P;
}

// Symmetric matrix of counts in [0, N] divided by N.
inline Matrix random_sym_volume(std::size_t m, std::size_t N, Rng& rng) {
  Matrix V(m, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = j; k < m; ++k)
      V(j, k) = V(k, j) = static_cast<double>(ihop::uniform_index(rng, N + 1)) / static_cast<double>(N);
  return V;
}

inline Matrix random_column_stochastic(std::size_t n, Rng& rng) {
  Matrix F(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < n; ++r) F(r, c) = unif(rng, 0.05, 1.0);
    F.col(c) /= F.col(c).sum();
  }
  return F;
}

// Observed chain with `r` outgoing transitions per token: returns F with
// integer counts r * F.
inline Matrix random_observed_chain(std::size_t m, std::size_t r, Rng& rng) {
  Matrix F = Matrix::Zero(m, m);
  for (std::size_t c = 0; c < m; ++c) {
    Vector w(m);
    for (std::size_t k = 0; k < m; ++k) w(k) = unif(rng, 0.0, 1.0);
    const ihop::DiscreteSampler pick(w);
    for (std::size_t t = 0; t < r; ++t) F(pick(rng), c) += 1;
  }
  return F / static_cast<double>(r);
}

// Volume linear term against per-token binomial diagonal counts.
inline Outcome check_volume_linear(Rng& rng) {
  const std::size_t n = 2 + ihop::uniform_index(rng, 5);
  const std::size_t m = 1 + ihop::uniform_index(rng, n);
  const std::size_t N = 5 + ihop::uniform_index(rng, 40);
  const Matrix V = random_sym_volume(m, N, rng);
  const Matrix Vt = random_sym_prob(n, rng);
  const ihop::attack::VolumeCoefficients prov(V, Vt, static_cast<double>(N));
  const auto kws = iota(n), toks = iota(m);
  auto nll = [&](const std::vector<std::size_t>& p) {
    double s = 0;
    for (std::size_t j = 0; j < m; ++j) s -= log_binom_pmf(N * V(j, j), N, Vt(p[j], p[j]));
    return s;
  };
  return compare(prov.linear_costs(kws, toks), m, n, nll);
}

// Quadratic volume terms of free tokens against a random fixed matching.
inline Outcome check_volume_quadratic(Rng& rng) {
  const std::size_t n = 3 + ihop::uniform_index(rng, 4);
  const std::size_t m = 2 + ihop::uniform_index(rng, n - 1);
  const std::size_t k = 1 + ihop::uniform_index(rng, m - 1);  // fixed tokens
  const std::size_t N = 5 + ihop::uniform_index(rng, 40);
  const Matrix V = random_sym_volume(m, N, rng);
  const Matrix Vt = random_sym_prob(n, rng);
  const ihop::attack::VolumeCoefficients prov(V, Vt, static_cast<double>(N));

  const auto tok_perm = ihop::random_permutation(m, rng);
  const auto kw_perm = ihop::random_permutation(n, rng);
  std::vector<ihop::attack::FixedPair> fixed;
  for (std::size_t t = 0; t < k; ++t) fixed.push_back({tok_perm[t], kw_perm[t]});
  const std::vector<Token> free_toks(tok_perm.begin() + static_cast<long>(k), tok_perm.end());
  const std::vector<Keyword> free_kws(kw_perm.begin() + static_cast<long>(k), kw_perm.end());

  auto nll = [&](const std::vector<std::size_t>& p) {
    double s = 0;
    for (std::size_t b = 0; b < free_toks.size(); ++b)
      for (const auto& fp : fixed)
        s -= log_binom_pmf(N * V(free_toks[b], fp.token), N, Vt(free_kws[p[b]], fp.keyword));
    return s;
  };
  return compare(prov.fixed_pair_costs(free_kws, free_toks, fixed), free_toks.size(), free_kws.size(), nll);
}

// Frequency term: Poisson query counts rho f_j with rates rho ftilde_i, all keywords used.
inline Outcome check_freq(Rng& rng) {
  const std::size_t n = 2 + ihop::uniform_index(rng, 5);
  Vector counts(n);
  for (std::size_t j = 0; j < n; ++j) counts(j) = static_cast<double>(ihop::uniform_index(rng, 30));
  if (counts.sum() == 0) counts(0) = 1;
  const double rho = counts.sum();
  Vector ft(n);
  for (std::size_t i = 0; i < n; ++i) ft(i) = unif(rng, 0.05, 1.0);
  ft /= ft.sum();
  const ihop::attack::FrequencyCoefficients prov(counts / rho, ft, rho);
  const auto all = iota(n);
  auto nll = [&](const std::vector<std::size_t>& p) {
    double s = 0;
    for (std::size_t j = 0; j < n; ++j) s -= log_pois_pmf(counts(j), rho * ft(p[j]));
    return s;
  };
  return compare(prov.linear_costs(all, all), n, n, nll);
}

// Share of free-to-free transitions entering each member of `free`, weighted
// by the source's mass; written out from the definition.
inline Vector free_shares(const Matrix& F, const Vector& w, const std::vector<std::size_t>& free) {
  Vector share(static_cast<Eigen::Index>(free.size()));
  double total = 0;
  for (std::size_t a = 0; a < free.size(); ++a) {
    double s = 0;
    for (std::size_t b = 0; b < free.size(); ++b)
      if (a != b) s += w(static_cast<Eigen::Index>(free[b])) * F(free[a], free[b]);
    share(static_cast<Eigen::Index>(a)) = s;
    total += s;
  }
  return total > 0 ? Vector(share / total) : share;
}

// Markov linear term: self-transition and into-free-aggregate Poisson counts; square
// instance, every token queried r times.
inline Outcome check_markov_linear(Rng& rng) {
  const std::size_t n = 2 + ihop::uniform_index(rng, 5);
  const std::size_t r = 5 + ihop::uniform_index(rng, 30);
  const Matrix F = random_observed_chain(n, r, rng);
  const Vector counts = Vector::Constant(static_cast<Eigen::Index>(n), static_cast<double>(r));
  const Matrix Ft = random_column_stochastic(n, rng);
  const Vector w = ihop::stationary_distribution(Ft);
  const ihop::attack::MarkovCoefficients prov(F, counts, Ft, w);

  const auto all = iota(n);
  const Vector tok_share = free_shares(F, counts, all);
  const Vector kw_share = free_shares(Ft, w, all);
  const double rho_circ = static_cast<double>(r) * static_cast<double>(n - 1);
  auto nll = [&](const std::vector<std::size_t>& p) {
    double s = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto i = p[j];
      s -= log_pois_pmf(r * F(j, j), r * Ft(i, i));
      s -= log_pois_pmf(rho_circ * tok_share(j), rho_circ * kw_share(i));
    }
    return s;
  };
  return compare(prov.linear_costs(all, all), n, n, nll);
}

// Markov quadratic term: transitions between free and fixed tokens in both directions.
inline Outcome check_markov_quadratic(Rng& rng) {
  const std::size_t n = 3 + ihop::uniform_index(rng, 4);
  const std::size_t k = 1 + ihop::uniform_index(rng, n - 2);
  const std::size_t r = 5 + ihop::uniform_index(rng, 30);
  const Matrix F = random_observed_chain(n, r, rng);
  const Vector counts = Vector::Constant(static_cast<Eigen::Index>(n), static_cast<double>(r));
  const Matrix Ft = random_column_stochastic(n, rng);
  const ihop::attack::MarkovCoefficients prov(F, counts, Ft, ihop::stationary_distribution(Ft));

  const auto tok_perm = ihop::random_permutation(n, rng);
  const auto kw_perm = ihop::random_permutation(n, rng);
  std::vector<ihop::attack::FixedPair> fixed;
  for (std::size_t t = 0; t < k; ++t) fixed.push_back({tok_perm[t], kw_perm[t]});
  const std::vector<Token> free_toks(tok_perm.begin() + static_cast<long>(k), tok_perm.end());
  const std::vector<Keyword> free_kws(kw_perm.begin() + static_cast<long>(k), kw_perm.end());

  auto nll = [&](const std::vector<std::size_t>& p) {
    double s = 0;
    for (std::size_t b = 0; b < free_toks.size(); ++b) {
      const auto j = free_toks[b];
      const auto i = free_kws[p[b]];
      for (const auto& fp : fixed) {
        s -= log_pois_pmf(r * F(j, fp.token), r * Ft(i, fp.keyword));  // fixed then free
        s -= log_pois_pmf(r * F(fp.token, j), r * Ft(fp.keyword, i));  // free then fixed
      }
    }
    return s;
  };
  return compare(prov.fixed_pair_costs(free_kws, free_toks, fixed), free_toks.size(), free_kws.size(), nll);
}

// Quadratic objective of a full map: sum_j d(p(j), j) plus c over unordered
// token pairs, each pair scored once as the linearized step scores it.
inline double pair_objective(const ihop::attack::CoefficientProvider& prov, const std::vector<std::size_t>& map) {
  const std::size_t m = map.size();
  double s = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const std::vector<Keyword> kw{map[j]};
    const std::vector<Token> tok{j};
    s += prov.linear_costs(kw, tok)(0, 0);
    for (std::size_t k = j + 1; k < m; ++k) {
      const std::vector<ihop::attack::FixedPair> other{{k, map[k]}};
      s += prov.fixed_pair_costs(kw, tok, other)(0, 0);
    }
  }
  return s;
}

inline double exhaustive_min_objective(const ihop::attack::CoefficientProvider& prov) {
  double best = std::numeric_limits<double>::infinity();
  for_each_injection(prov.num_tokens(), prov.num_keywords(),
                     [&](const std::vector<std::size_t>& map) { best = std::min(best, pair_objective(prov, map)); });
  return best;
}

// Exact co-occurrence probabilities of n keywords under a random
// distribution over all 2^n keyword subsets (every subset has positive mass,
// so all entries lie strictly in (0,1)).
inline Matrix random_joint_volume(std::size_t n, Rng& rng) {
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<double> w(subsets);
  double total = 0;
  for (auto& x : w) total += (x = unif(rng, 0.05, 1.0));
  Matrix P = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t s = 0; s < subsets; ++s)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if ((s >> i & 1) && (s >> k & 1)) P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) += w[s] / total;
  return P;
}

struct MicroVolume {
  ihop::LeakageStats leakage;
  ihop::AuxStats aux;
  std::vector<Keyword> truth;  // token -> keyword
};

// Noiseless S1 instance: observed V is the exact probability matrix under a
// random token relabeling, the auxiliary matrix is the same probabilities.
inline MicroVolume micro_volume_instance(std::size_t n, double num_docs, Rng& rng) {
  MicroVolume out;
  out.aux.volume = random_joint_volume(n, rng);
  out.aux.num_keywords = n;
  out.truth = ihop::random_permutation(n, rng);
  Matrix V(out.aux.volume.rows(), out.aux.volume.cols());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      V(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
          out.aux.volume(static_cast<Eigen::Index>(out.truth[j]), static_cast<Eigen::Index>(out.truth[k]));
  out.leakage.volume = V;
  out.leakage.num_docs = num_docs;
  out.leakage.num_tokens = n;
  return out;
}

}  // namespace oracle
