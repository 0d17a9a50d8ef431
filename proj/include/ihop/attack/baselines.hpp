#pragma once

#include <cstdint>
#include <optional>

#include "ihop/attack/coefficients.hpp"
#include "ihop/core/types.hpp"

namespace ihop::attack {

/// SAP cost: alpha * (frequency term) / max(rho, 1) + (1 - alpha) * (volume
/// diagonal term) / N_d, linear part only. A term is left out when its weight
/// is zero or (frequency) when the leakage carries no queries.
ProviderPtr sap_provider(const LeakageStats& leakage, const AuxStats& aux, double alpha = 0.5);

/// One LAP over the SAP cost.
Assignment sap_attack(const LeakageStats& leakage, const AuxStats& aux, double alpha = 0.5);

/// Maps each token to the keyword with the closest auxiliary frequency. The
/// result need not be injective; ties go to the lowest keyword index.
std::vector<Keyword> freq_attack(const Vector& f, const Vector& ftilde);

struct IkkConfig {
  double T0 = 100.0;
  double cooling = 0.99995;
  double T_min = 1e-10;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct IkkResult {
  Assignment assignment;       // best state visited
  double objective = 0;        // ||Vt - P V P^T||_F^2 of `assignment`
  double initial_objective = 0;
  std::size_t steps = 0;
};

/// Simulated annealing over injective maps for the squared Frobenius
/// objective. The start state is a uniformly random injective map.
///
/// Move: pick a token and a different keyword uniformly; if that keyword is
/// held by another token the two swap. Worse moves are accepted with
/// probability exp(-dE / T); T is multiplied by `cooling` after each step
/// until it drops below T_min.
IkkResult ikk_attack(const Matrix& V, const Matrix& Vtilde, const IkkConfig& config = {});
/// As above from a given start state instead of a random one.
IkkResult ikk_attack(const Matrix& V, const Matrix& Vtilde, const IkkConfig& config,
                     const std::optional<Assignment>& start);

/// ||Vt - P V P^T||_F^2 where P embeds tokens into keywords by `assignment`.
double ikk_objective(const Matrix& V, const Matrix& Vtilde, const Assignment& assignment);

}  // namespace ihop::attack
