#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ihop/core/types.hpp"

namespace ihop::pipeline {

/// Weighted directed click graph plus per-node counts of sessions entering
/// from outside the graph.
class TransitionGraph {
 public:
  std::size_t add_node(std::string_view label);
  /// Adds `count` to the edge src -> dst, creating nodes as needed.
  void add_edge(std::string_view src, std::string_view dst, double count);
  void add_external(std::string_view dst, double count);

  std::size_t size() const { return labels_.size(); }
  bool contains(std::string_view label) const;
  std::size_t index(std::string_view label) const;  // throws if absent
  const std::string& label(std::size_t node) const { return labels_[node]; }
  const std::map<std::size_t, double>& out_edges(std::size_t node) const { return out_[node]; }
  double external(std::size_t node) const { return external_[node]; }
  /// Distinct neighbors in either direction, self-loops excluded.
  const std::vector<std::size_t>& neighbors(std::size_t node) const { return neighbors_[node]; }

 private:
  std::vector<std::string> labels_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<std::map<std::size_t, double>> out_;
  std::vector<double> external_;
  std::vector<std::vector<std::size_t>> neighbors_;
};

/// Clickstream TSV: `src<TAB>dst<TAB>count`, or the four-column
/// `src<TAB>dst<TAB>type<TAB>count`. Sources starting with "other-" count as
/// external entries into dst.
TransitionGraph load_clickstream_tsv(const std::filesystem::path& path);
TransitionGraph parse_clickstream_tsv(std::istream& in);

/// Column i: (1 - restart) * (out-edges of universe[i] into the universe,
/// normalized) + restart * p_other; a node without such edges gets p_other.
/// p_other is the external-entry profile over the universe.
///
/// Throws std::invalid_argument if a label is missing or p_other is all zero.
Matrix build_markov_from_graph(const TransitionGraph& graph, const std::vector<std::string>& universe,
                               double restart_prob = 0.05);

/// Grows or shrinks the category subgraph to `n` nodes: drop nodes of degree
/// <= 1, drop smallest-degree nodes while larger than n, add the outside nodes
/// with most edges into the subgraph until it has n nodes, then swap the
/// weakest inside node for the best outside one while it is clearly better
/// connected and the swap adds internal edges. Ties go to the smaller label.
/// The result is sorted by label.
///
/// Throws std::invalid_argument if the graph has fewer than n nodes.
std::vector<std::string> select_universe_from_graph(const TransitionGraph& graph,
                                                    const std::vector<std::string>& category_nodes,
                                                    std::size_t n, std::size_t max_swaps = 100'000);

}  // namespace ihop::pipeline
