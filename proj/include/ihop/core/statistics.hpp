#pragma once

#include <span>

#include "ihop/core/types.hpp"

namespace ihop {

/// V_{j,j'} = a_j . a_j' / N_d over the given access patterns.
Matrix compute_observed_volume(std::span<const AccessPattern> patterns, std::size_t num_docs);

struct AuxVolume {
  Matrix volume;      // (c_both + 0.5) / (N + 1)
  Matrix volume_not;  // (c_neither + 0.5) / (N + 1)
};

/// Smoothed co-occurrence and non-occurrence fractions of an auxiliary corpus.
AuxVolume compute_aux_volume(const DocumentCollection& aux_docs);

struct ObservedFrequency {
  Vector frequency;     // f_j = rho(tau_j) / rho
  Matrix markov;        // F_{j,j'} = #(j' then j) / #(transitions out of j')
  Vector query_counts;  // rho(tau_j)
};

/// Frequency statistics of a token sequence over m tokens.
///
/// The last token of the sequence has no successor, so each column of F is
/// normalized by its outgoing-transition count rather than by rho(tau_j);
/// columns without outgoing transitions stay zero.
ObservedFrequency compute_observed_freq(std::span<const Token> tokens, std::size_t num_tokens);

/// Adds `eps` to every entry and renormalizes to unit mass.
Vector smooth_frequency(const Vector& f, double eps = 1e-6);
/// Adds `eps` to every entry and renormalizes every column.
Matrix smooth_markov(const Matrix& F, double eps = 1e-6);

/// Observed statistics for a trace. In S2 each token's volume row uses the
/// access pattern of its first occurrence.
LeakageStats compute_leakage(const ObservationTrace& trace);

}  // namespace ihop
