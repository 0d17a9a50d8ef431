#pragma once

#include <memory>
#include <span>
#include <vector>

#include "ihop/core/types.hpp"

namespace ihop::attack {

struct FixedPair {
  Token token;
  Keyword keyword;
};

/// Supplies the linear costs d_{i,j} and the quadratic costs c_{i,i',j,j'}
/// of the assignment objective, already aggregated against a fixed matching.
///
/// Both functions return |free_kws| x |free_toks| blocks (rows are keywords).
class CoefficientProvider {
 public:
  virtual ~CoefficientProvider() = default;

  virtual std::size_t num_keywords() const = 0;
  virtual std::size_t num_tokens() const = 0;

  virtual Matrix linear_costs(std::span<const Keyword> free_kws,
                              std::span<const Token> free_toks) const = 0;

  /// Entry (a, b) is sum over fixed pairs (i', j') of c_{free_kws[a], i', free_toks[b], j'}.
  virtual Matrix fixed_pair_costs(std::span<const Keyword> free_kws,
                                  std::span<const Token> free_toks,
                                  std::span<const FixedPair> fixed) const = 0;
};

using ProviderPtr = std::shared_ptr<const CoefficientProvider>;

enum class VolumeSign {
  // -N_d [V log Vt + (1 - V) log(1 - Vt)]: the negative binomial log-likelihood.
  Likelihood,
  // -N_d [V log Vt - (1 - V) log(1 - Vt)], kept for ablation.
  NegatedComplement,
};

/// Binomial volume model. `aux_volume` may be Vtilde or a defense-adjusted Vhat.
class VolumeCoefficients final : public CoefficientProvider {
 public:
  VolumeCoefficients(Matrix observed, const Matrix& aux_volume, double num_docs,
                     VolumeSign sign = VolumeSign::Likelihood);

  std::size_t num_keywords() const override { return static_cast<std::size_t>(log_aux_.rows()); }
  std::size_t num_tokens() const override { return static_cast<std::size_t>(observed_.rows()); }
  Matrix linear_costs(std::span<const Keyword> free_kws, std::span<const Token> free_toks) const override;
  Matrix fixed_pair_costs(std::span<const Keyword> free_kws, std::span<const Token> free_toks,
                          std::span<const FixedPair> fixed) const override;

  const Matrix& full_linear_costs() const { return linear_; }

 private:
  Matrix observed_;
  Matrix log_aux_;         // log Vt
  Matrix log_aux_compl_;   // log(1 - Vt)
  double num_docs_;
  double compl_sign_;      // +1 likelihood form, -1 negated complement
  Matrix linear_;          // n x m, cached once
};

/// Independent-query Poisson model: d_{i,j} = -rho f_j log ftilde_i, no quadratic terms.
class FrequencyCoefficients final : public CoefficientProvider {
 public:
  FrequencyCoefficients(const Vector& observed, const Vector& aux, double num_queries);

  std::size_t num_keywords() const override { return static_cast<std::size_t>(linear_.rows()); }
  std::size_t num_tokens() const override { return static_cast<std::size_t>(linear_.cols()); }
  Matrix linear_costs(std::span<const Keyword> free_kws, std::span<const Token> free_toks) const override;
  Matrix fixed_pair_costs(std::span<const Keyword> free_kws, std::span<const Token> free_toks,
                          std::span<const FixedPair> fixed) const override;

 private:
  Matrix linear_;
};

/// How rho(tau_circ) is formed for a free token j.
enum class RhoCircMode {
  // Sum of counts of the free tokens other than j (one value per token).
  ExcludeSelf,
  // Sum of counts of all free tokens (a single scalar).
  Pooled,
};

struct FreeAggregate {
  Vector share;      // F_{j,circ}: fraction of free-to-free transitions landing on j
  Vector rho_circ;   // rho(tau_circ) per free token
};

/// Aggregates transitions among the `free` states of a column-stochastic
/// matrix weighted by `weights` (query counts on the token side, stationary
/// mass on the keyword side). Shares sum to 1 over `free` unless there are no
/// such transitions, in which case all shares are 0.
FreeAggregate markov_free_aggregate(const Matrix& F, const Vector& weights,
                                    std::span<const std::size_t> free,
                                    RhoCircMode mode = RhoCircMode::ExcludeSelf);

/// Markov-chain Poisson model for correlated queries.
///
/// `aux_markov` is Ftilde (or the expected replica matrix under PANCAKE) and
/// `aux_weights` its stationary profile, used in place of query counts when
/// aggregating over free keywords.
class MarkovCoefficients final : public CoefficientProvider {
 public:
  MarkovCoefficients(Matrix observed, Vector token_counts, const Matrix& aux_markov,
                     Vector aux_weights, RhoCircMode mode = RhoCircMode::ExcludeSelf);

  std::size_t num_keywords() const override { return static_cast<std::size_t>(aux_.rows()); }
  std::size_t num_tokens() const override { return static_cast<std::size_t>(observed_.rows()); }
  Matrix linear_costs(std::span<const Keyword> free_kws, std::span<const Token> free_toks) const override;
  Matrix fixed_pair_costs(std::span<const Keyword> free_kws, std::span<const Token> free_toks,
                          std::span<const FixedPair> fixed) const override;

 private:
  Matrix observed_;       // F
  Vector counts_;         // rho(tau_j)
  Matrix transitions_;    // rho(tau_j') F_{j,j'}
  Matrix aux_;            // Ftilde
  Matrix log_aux_;
  Vector aux_weights_;
  RhoCircMode mode_;
};

/// Entrywise sum of several providers over the same keyword/token spaces.
class AdditiveCoefficients final : public CoefficientProvider {
 public:
  explicit AdditiveCoefficients(std::vector<ProviderPtr> parts);

  std::size_t num_keywords() const override { return parts_.front()->num_keywords(); }
  std::size_t num_tokens() const override { return parts_.front()->num_tokens(); }
  Matrix linear_costs(std::span<const Keyword> free_kws, std::span<const Token> free_toks) const override;
  Matrix fixed_pair_costs(std::span<const Keyword> free_kws, std::span<const Token> free_toks,
                          std::span<const FixedPair> fixed) const override;

 private:
  std::vector<ProviderPtr> parts_;
};

/// Multiplies both cost families by a positive constant.
class ScaledCoefficients final : public CoefficientProvider {
 public:
  ScaledCoefficients(ProviderPtr inner, double factor);

  std::size_t num_keywords() const override { return inner_->num_keywords(); }
  std::size_t num_tokens() const override { return inner_->num_tokens(); }
  Matrix linear_costs(std::span<const Keyword> free_kws, std::span<const Token> free_toks) const override;
  Matrix fixed_pair_costs(std::span<const Keyword> free_kws, std::span<const Token> free_toks,
                          std::span<const FixedPair> fixed) const override;

 private:
  ProviderPtr inner_;
  double factor_;
};

/// Keeps the linear costs of `inner` and drops its quadratic terms.
class LinearOnlyCoefficients final : public CoefficientProvider {
 public:
  explicit LinearOnlyCoefficients(ProviderPtr inner) : inner_(std::move(inner)) {}

  std::size_t num_keywords() const override { return inner_->num_keywords(); }
  std::size_t num_tokens() const override { return inner_->num_tokens(); }
  Matrix linear_costs(std::span<const Keyword> free_kws, std::span<const Token> free_toks) const override {
    return inner_->linear_costs(free_kws, free_toks);
  }
  Matrix fixed_pair_costs(std::span<const Keyword> free_kws, std::span<const Token> free_toks,
                          std::span<const FixedPair>) const override {
    return Matrix::Zero(static_cast<Eigen::Index>(free_kws.size()),
                        static_cast<Eigen::Index>(free_toks.size()));
  }

 private:
  ProviderPtr inner_;
};

/// All-zero costs; the identity element of combine_additive.
class ZeroCoefficients final : public CoefficientProvider {
 public:
  ZeroCoefficients(std::size_t num_keywords, std::size_t num_tokens)
      : n_(num_keywords), m_(num_tokens) {}

  std::size_t num_keywords() const override { return n_; }
  std::size_t num_tokens() const override { return m_; }
  Matrix linear_costs(std::span<const Keyword> free_kws, std::span<const Token> free_toks) const override {
    return Matrix::Zero(static_cast<Eigen::Index>(free_kws.size()),
                        static_cast<Eigen::Index>(free_toks.size()));
  }
  Matrix fixed_pair_costs(std::span<const Keyword> free_kws, std::span<const Token> free_toks,
                          std::span<const FixedPair>) const override {
    return linear_costs(free_kws, free_toks);
  }

 private:
  std::size_t n_, m_;
};

ProviderPtr combine_additive(std::vector<ProviderPtr> providers);

}  // namespace ihop::attack
