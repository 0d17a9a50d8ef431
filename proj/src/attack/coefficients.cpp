#include "ihop/attack/coefficients.hpp"

#include <cmath>
#include <stdexcept>

namespace ihop::attack {

namespace {

std::vector<Eigen::Index> to_index(std::span<const std::size_t> ids) {
  return {ids.begin(), ids.end()};
}

void require_open_unit(const Matrix& m, const char* what) {
  if (!((m.array() > 0.0).all() && (m.array() < 1.0).all()))
    throw std::invalid_argument(std::string(what) + ": auxiliary entries must lie strictly in (0,1)");
}

// coef * log(p), with 0 * log(0) = 0.
double xlogy(double coef, double p) { return coef == 0.0 ? 0.0 : coef * std::log(p); }

}  // namespace

// --- volume -----------------------------------------------------------------

VolumeCoefficients::VolumeCoefficients(Matrix observed, const Matrix& aux_volume, double num_docs,
                                       VolumeSign sign)
    : observed_(std::move(observed)),
      num_docs_(num_docs),
      compl_sign_(sign == VolumeSign::Likelihood ? 1.0 : -1.0) {
  if (observed_.rows() != observed_.cols() || aux_volume.rows() != aux_volume.cols())
    throw std::invalid_argument("VolumeCoefficients: volume matrices must be square");
  if (!(num_docs_ > 0)) throw std::invalid_argument("VolumeCoefficients: N_d must be positive");
  require_open_unit(aux_volume, "VolumeCoefficients");
  log_aux_ = aux_volume.array().log();
  log_aux_compl_ = (1.0 - aux_volume.array()).log();

  const Vector v = observed_.diagonal();
  const Vector log_p = log_aux_.diagonal();
  const Vector log_q = log_aux_compl_.diagonal();
  const Vector miss = (1.0 - v.array()).matrix();
  linear_ = -num_docs_ * (log_p * v.transpose() + compl_sign_ * log_q * miss.transpose());
}

Matrix VolumeCoefficients::linear_costs(std::span<const Keyword> free_kws,
                                        std::span<const Token> free_toks) const {
  return linear_(to_index(free_kws), to_index(free_toks));
}

Matrix VolumeCoefficients::fixed_pair_costs(std::span<const Keyword> free_kws,
                                            std::span<const Token> free_toks,
                                            std::span<const FixedPair> fixed) const {
  const auto rows = to_index(free_kws);
  const auto cols = to_index(free_toks);
  if (fixed.empty()) return Matrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  std::vector<Eigen::Index> fixed_kws, fixed_toks;
  fixed_kws.reserve(fixed.size());
  fixed_toks.reserve(fixed.size());
  for (const auto& p : fixed) {
    fixed_kws.push_back(static_cast<Eigen::Index>(p.keyword));
    fixed_toks.push_back(static_cast<Eigen::Index>(p.token));
  }
  const Matrix hit_log = log_aux_(rows, fixed_kws);          // |free_kws| x |fixed|
  const Matrix miss_log = log_aux_compl_(rows, fixed_kws);
  const Matrix hits = observed_(cols, fixed_toks);           // |free_toks| x |fixed|
  const Matrix misses = (1.0 - hits.array()).matrix();
  Matrix out = hit_log * hits.transpose();
  out.noalias() += compl_sign_ * miss_log * misses.transpose();
  out *= -num_docs_;
  return out;
}

// --- independent frequencies --------------------------------------------------

FrequencyCoefficients::FrequencyCoefficients(const Vector& observed, const Vector& aux,
                                             double num_queries) {
  if (!(aux.array() > 0.0).all())
    throw std::invalid_argument("FrequencyCoefficients: auxiliary frequencies must be positive");
  if ((observed.array() < 0.0).any())
    throw std::invalid_argument("FrequencyCoefficients: observed frequencies must be nonnegative");
  const Vector log_aux = aux.array().log();
  linear_ = -num_queries * (log_aux * observed.transpose());
}

Matrix FrequencyCoefficients::linear_costs(std::span<const Keyword> free_kws,
                                           std::span<const Token> free_toks) const {
  return linear_(to_index(free_kws), to_index(free_toks));
}

Matrix FrequencyCoefficients::fixed_pair_costs(std::span<const Keyword> free_kws,
                                               std::span<const Token> free_toks,
                                               std::span<const FixedPair>) const {
  return Matrix::Zero(static_cast<Eigen::Index>(free_kws.size()),
                      static_cast<Eigen::Index>(free_toks.size()));
}

// --- Markov -------------------------------------------------------------------

FreeAggregate markov_free_aggregate(const Matrix& F, const Vector& weights,
                                    std::span<const std::size_t> free, RhoCircMode mode) {
  const auto k = static_cast<Eigen::Index>(free.size());
  FreeAggregate out{Vector::Zero(k), Vector::Zero(k)};
  double total_weight = 0;
  for (std::size_t s : free) total_weight += weights(static_cast<Eigen::Index>(s));

  for (Eigen::Index a = 0; a < k; ++a) {
    const auto j = static_cast<Eigen::Index>(free[static_cast<std::size_t>(a)]);
    double incoming = 0;
    for (std::size_t s : free) {
      const auto src = static_cast<Eigen::Index>(s);
      if (src != j) incoming += weights(src) * F(j, src);
    }
    out.share(a) = incoming;
    out.rho_circ(a) = mode == RhoCircMode::ExcludeSelf ? total_weight - weights(j) : total_weight;
  }
  const double norm = out.share.sum();
  if (norm > 0) out.share /= norm;
  return out;
}

MarkovCoefficients::MarkovCoefficients(Matrix observed, Vector token_counts, const Matrix& aux_markov,
                                       Vector aux_weights, RhoCircMode mode)
    : observed_(std::move(observed)),
      counts_(std::move(token_counts)),
      aux_(aux_markov),
      aux_weights_(std::move(aux_weights)),
      mode_(mode) {
  if (observed_.rows() != observed_.cols() || counts_.size() != observed_.rows())
    throw std::invalid_argument("MarkovCoefficients: observed matrix / counts shape mismatch");
  if (aux_.rows() != aux_.cols() || aux_weights_.size() != aux_.rows())
    throw std::invalid_argument("MarkovCoefficients: auxiliary matrix / weights shape mismatch");
  if (!(aux_.array() > 0.0).all())
    throw std::invalid_argument("MarkovCoefficients: auxiliary transition probabilities must be positive");
  log_aux_ = aux_.array().log();
  transitions_ = observed_ * counts_.asDiagonal();
}

Matrix MarkovCoefficients::linear_costs(std::span<const Keyword> free_kws,
                                        std::span<const Token> free_toks) const {
  const auto tok = markov_free_aggregate(observed_, counts_, free_toks, mode_);
  const auto kw = markov_free_aggregate(aux_, aux_weights_, free_kws, RhoCircMode::ExcludeSelf);
  const auto rows = static_cast<Eigen::Index>(free_kws.size());
  const auto cols = static_cast<Eigen::Index>(free_toks.size());
  Matrix d(rows, cols);
  for (Eigen::Index b = 0; b < cols; ++b) {
    const auto j = static_cast<Eigen::Index>(free_toks[static_cast<std::size_t>(b)]);
    const double self = transitions_(j, j);                 // rho(tau_j) F_{j,j}
    const double into = tok.rho_circ(b) * tok.share(b);     // rho(tau_circ) F_{j,circ}
    for (Eigen::Index a = 0; a < rows; ++a) {
      const auto i = static_cast<Eigen::Index>(free_kws[static_cast<std::size_t>(a)]);
      d(a, b) = -(self * log_aux_(i, i) + xlogy(into, kw.share(a)));
    }
  }
  return d;
}

Matrix MarkovCoefficients::fixed_pair_costs(std::span<const Keyword> free_kws,
                                            std::span<const Token> free_toks,
                                            std::span<const FixedPair> fixed) const {
  const auto rows = to_index(free_kws);
  const auto cols = to_index(free_toks);
  if (fixed.empty()) return Matrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  std::vector<Eigen::Index> fixed_kws, fixed_toks;
  for (const auto& p : fixed) {
    fixed_kws.push_back(static_cast<Eigen::Index>(p.keyword));
    fixed_toks.push_back(static_cast<Eigen::Index>(p.token));
  }
  // j' -> j (free token follows fixed) and j -> j' (fixed follows free).
  const Matrix log_into_free = log_aux_(rows, fixed_kws);                 // log Ft(i, i')
  const Matrix log_from_free = log_aux_(fixed_kws, rows).transpose();     // log Ft(i', i)
  const Matrix into_free = transitions_(cols, fixed_toks);                // rho(j') F(j, j')
  const Matrix from_free = transitions_(fixed_toks, cols).transpose();    // rho(j) F(j', j)
  Matrix out = log_into_free * into_free.transpose();
  out.noalias() += log_from_free * from_free.transpose();
  return -out;
}

// --- combinators ----------------------------------------------------------------

AdditiveCoefficients::AdditiveCoefficients(std::vector<ProviderPtr> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw std::invalid_argument("AdditiveCoefficients: no providers");
  for (const auto& p : parts_) {
    if (!p) throw std::invalid_argument("AdditiveCoefficients: null provider");
    if (p->num_keywords() != parts_.front()->num_keywords() ||
        p->num_tokens() != parts_.front()->num_tokens())
      throw std::invalid_argument("AdditiveCoefficients: providers disagree on dimensions");
  }
}

Matrix AdditiveCoefficients::linear_costs(std::span<const Keyword> free_kws,
                                          std::span<const Token> free_toks) const {
  Matrix out = parts_.front()->linear_costs(free_kws, free_toks);
  for (std::size_t p = 1; p < parts_.size(); ++p) out += parts_[p]->linear_costs(free_kws, free_toks);
  return out;
}

Matrix AdditiveCoefficients::fixed_pair_costs(std::span<const Keyword> free_kws,
                                              std::span<const Token> free_toks,
                                              std::span<const FixedPair> fixed) const {
  Matrix out = parts_.front()->fixed_pair_costs(free_kws, free_toks, fixed);
  for (std::size_t p = 1; p < parts_.size(); ++p)
    out += parts_[p]->fixed_pair_costs(free_kws, free_toks, fixed);
  return out;
}

ScaledCoefficients::ScaledCoefficients(ProviderPtr inner, double factor)
    : inner_(std::move(inner)), factor_(factor) {
  if (!inner_) throw std::invalid_argument("ScaledCoefficients: null provider");
  if (!(factor_ > 0) || !std::isfinite(factor_))
    throw std::invalid_argument("ScaledCoefficients: factor must be positive and finite");
}

Matrix ScaledCoefficients::linear_costs(std::span<const Keyword> free_kws,
                                        std::span<const Token> free_toks) const {
  return factor_ * inner_->linear_costs(free_kws, free_toks);
}

Matrix ScaledCoefficients::fixed_pair_costs(std::span<const Keyword> free_kws,
                                            std::span<const Token> free_toks,
                                            std::span<const FixedPair> fixed) const {
  return factor_ * inner_->fixed_pair_costs(free_kws, free_toks, fixed);
}

ProviderPtr combine_additive(std::vector<ProviderPtr> providers) {
  if (providers.size() == 1) return providers.front();
  return std::make_shared<AdditiveCoefficients>(std::move(providers));
}

}  // namespace ihop::attack
