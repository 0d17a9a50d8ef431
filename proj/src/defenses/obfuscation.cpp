#include "ihop/defenses/obfuscation.hpp"

#include <memory>
#include <stdexcept>
#include <string>

namespace ihop::defenses {

void ObfuscationParams::validate() const {
  if (!(fpr >= 0.0 && fpr <= tpr && tpr <= 1.0))
    throw std::invalid_argument("ObfuscationParams: need 0 <= fpr <= tpr <= 1 (tpr=" +
                                std::to_string(tpr) + ", fpr=" + std::to_string(fpr) + ")");
}

DocumentCollection clrz_apply(const DocumentCollection& docs, const ObfuscationParams& params,
                              std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  const std::size_t n = docs.num_keywords();
  std::vector<std::vector<Keyword>> out(docs.num_docs());
  std::vector<char> present(n);
  for (std::size_t d = 0; d < docs.num_docs(); ++d) {
    std::fill(present.begin(), present.end(), 0);
    for (Keyword k : docs.document(d)) present[k] = 1;
    for (Keyword k = 0; k < n; ++k)
      if (bernoulli(rng, present[k] ? params.tpr : params.fpr)) out[d].push_back(k);
  }
  return DocumentCollection(n, std::move(out));
}

Matrix clrz_expected_volume(const Matrix& Vtilde, const Matrix& Vtilde_not,
                            const ObfuscationParams& params) {
  params.validate();
  if (Vtilde.rows() != Vtilde_not.rows() || Vtilde.cols() != Vtilde_not.cols())
    throw std::invalid_argument("clrz_expected_volume: shape mismatch");
  const double tp = params.tpr;
  const double fp = params.fpr;
  Matrix out = tp * tp * Vtilde + fp * fp * Vtilde_not +
               tp * fp * (Matrix::Ones(Vtilde.rows(), Vtilde.cols()) - Vtilde - Vtilde_not);
  out.diagonal() = tp * Vtilde.diagonal() + fp * Vtilde_not.diagonal();
  return out;
}

AccessPattern osse_query(const AccessPattern& true_pattern, const ObfuscationParams& params, Rng& rng) {
  AccessPattern out(true_pattern.size());
  for (std::size_t d = 0; d < true_pattern.size(); ++d)
    if (bernoulli(rng, true_pattern.test(d) ? params.tpr : params.fpr)) out.set(d);
  return out;
}

AccessPattern osse_query(const DocumentCollection& docs, Keyword keyword,
                         const ObfuscationParams& params, std::uint64_t seed) {
  params.validate();
  if (keyword >= docs.num_keywords()) throw std::invalid_argument("osse_query: keyword out of range");
  AccessPattern truth(docs.num_docs());
  for (std::size_t d = 0; d < docs.num_docs(); ++d)
    for (Keyword k : docs.document(d))
      if (k == keyword) truth.set(d);
  Rng rng(seed);
  return osse_query(truth, params, rng);
}

PatternSource make_osse_pattern_source(const DocumentCollection& docs, const ObfuscationParams& params) {
  params.validate();
  auto patterns = std::make_shared<const std::vector<AccessPattern>>(docs.keyword_patterns());
  return [patterns, params](Keyword keyword, Rng& rng) {
    return osse_query((*patterns)[keyword], params, rng);
  };
}

}  // namespace ihop::defenses
