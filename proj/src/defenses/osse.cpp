#include "ihop/defenses/osse.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ihop::defenses {

double jaccard_distance(const AccessPattern& a, const AccessPattern& b) {
  const std::size_t uni = a.or_count(b);
  if (uni == 0) return 0.0;
  return 1.0 - static_cast<double>(a.and_count(b)) / static_cast<double>(uni);
}

std::vector<Cluster> osse_cluster(std::span<const AccessPattern> patterns, std::size_t m) {
  const std::size_t p = patterns.size();
  if (m == 0) throw std::invalid_argument("osse_cluster: m must be positive");
  if (p < m) throw std::invalid_argument("osse_cluster: fewer patterns than clusters");

  std::vector<double> dist(p * p, 0.0);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a + 1; b < p; ++b)
      dist[a * p + b] = dist[b * p + a] = jaccard_distance(patterns[a], patterns[b]);

  // Cluster slots are identified by their smallest member, which never changes
  // when a slot absorbs a later one.
  std::vector<Cluster> members(p);
  for (std::size_t a = 0; a < p; ++a) members[a] = {a};
  std::vector<std::size_t> active(p);
  for (std::size_t a = 0; a < p; ++a) active[a] = a;

  while (active.size() > m) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_x = 0, best_y = 1;
    for (std::size_t x = 0; x < active.size(); ++x)
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        const double d = dist[active[x] * p + active[y]];
        if (d < best) {
          best = d;
          best_x = x;
          best_y = y;
        }
      }
    const std::size_t keep = active[best_x];
    const std::size_t gone = active[best_y];
    const auto wk = static_cast<double>(members[keep].size());
    const auto wg = static_cast<double>(members[gone].size());
    for (std::size_t c : active) {
      if (c == keep || c == gone) continue;
      const double d = (wk * dist[keep * p + c] + wg * dist[gone * p + c]) / (wk + wg);
      dist[keep * p + c] = dist[c * p + keep] = d;
    }
    members[keep].insert(members[keep].end(), members[gone].begin(), members[gone].end());
    std::sort(members[keep].begin(), members[keep].end());
    members[gone].clear();
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_y));
  }

  std::vector<Cluster> out;
  out.reserve(m);
  for (std::size_t c : active) out.push_back(std::move(members[c]));
  return out;
}

Matrix osse_observed_volume(std::span<const AccessPattern> patterns, std::span<const Cluster> clusters,
                            std::size_t num_docs) {
  if (num_docs == 0) throw std::invalid_argument("osse_observed_volume: N_d must be positive");
  const auto m = static_cast<Eigen::Index>(clusters.size());
  Matrix V(m, m);
  const auto nd = static_cast<double>(num_docs);
  for (Eigen::Index x = 0; x < m; ++x) {
    const auto& cx = clusters[static_cast<std::size_t>(x)];
    if (cx.empty()) throw std::invalid_argument("osse_observed_volume: empty cluster");
    double self = 0;
    for (std::size_t a : cx) self += static_cast<double>(patterns[a].count());
    V(x, x) = self / (static_cast<double>(cx.size()) * nd);
    for (Eigen::Index y = x + 1; y < m; ++y) {
      const auto& cy = clusters[static_cast<std::size_t>(y)];
      double sum = 0;
      for (std::size_t a : cx)
        for (std::size_t b : cy) sum += static_cast<double>(patterns[a].and_count(patterns[b]));
      V(x, y) = V(y, x) = sum / (static_cast<double>(cx.size() * cy.size()) * nd);
    }
  }
  return V;
}

}  // namespace ihop::defenses
