#pragma once

#include <span>
#include <vector>

#include "ihop/core/types.hpp"

namespace ihop::defenses {

using Cluster = std::vector<std::size_t>;

/// 1 - |a & b| / |a | b|; two empty patterns are at distance 0.
double jaccard_distance(const AccessPattern& a, const AccessPattern& b);

/// Average-linkage agglomerative clustering under Jaccard distance, stopped at
/// `m` clusters. Each cluster lists pattern indices in increasing order and
/// clusters are sorted by their smallest member. The closest pair is merged
/// first; ties go to the pair that comes first in (lower, upper) index order,
/// so the result depends only on the input order.
///
/// Throws std::invalid_argument if there are fewer patterns than m or m == 0.
std::vector<Cluster> osse_cluster(std::span<const AccessPattern> patterns, std::size_t m);

/// Cluster-averaged volumes: V(j, j') is the mean of a . a' / N_d over all
/// cross pairs of clusters j and j'; V(j, j) is the mean |a| / N_d in cluster j.
Matrix osse_observed_volume(std::span<const AccessPattern> patterns, std::span<const Cluster> clusters,
                            std::size_t num_docs);

}  // namespace ihop::defenses
