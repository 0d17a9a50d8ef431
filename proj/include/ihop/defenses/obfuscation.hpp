#pragma once

#include <cstdint>

#include "ihop/core/random.hpp"
#include "ihop/core/simulation.hpp"
#include "ihop/core/types.hpp"

namespace ihop::defenses {

/// Keep a true keyword-document incidence with probability `tpr`, inject a
/// false one with probability `fpr`.
struct ObfuscationParams {
  double tpr = 0.9999;
  double fpr = 0.0;

  /// Requires 0 <= fpr <= tpr <= 1.
  void validate() const;
};

/// CLRZ: obfuscates the incidence once at setup, so every query for a keyword
/// returns the same pattern afterwards.
DocumentCollection clrz_apply(const DocumentCollection& docs, const ObfuscationParams& params,
                              std::uint64_t seed);

/// Expected post-CLRZ volumes. Off-diagonal entries mix both-present,
/// neither-present and exactly-one-present fractions; the diagonal is
/// tpr * Vt + fpr * Vt_not.
Matrix clrz_expected_volume(const Matrix& Vtilde, const Matrix& Vtilde_not,
                            const ObfuscationParams& params);

/// OSSE: a fresh Bernoulli obfuscation of `true_pattern` for each query.
AccessPattern osse_query(const AccessPattern& true_pattern, const ObfuscationParams& params, Rng& rng);
AccessPattern osse_query(const DocumentCollection& docs, Keyword keyword,
                         const ObfuscationParams& params, std::uint64_t seed);

/// Pattern source for simulate_s2 that obfuscates every query independently.
PatternSource make_osse_pattern_source(const DocumentCollection& docs, const ObfuscationParams& params);

}  // namespace ihop::defenses
