#include "ihop/pipeline/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ihop::pipeline {

std::size_t TransitionGraph::add_node(std::string_view label) {
  if (auto it = index_.find(label); it != index_.end()) return it->second;
  const std::size_t id = labels_.size();
  labels_.emplace_back(label);
  index_.emplace(std::string(label), id);
  out_.emplace_back();
  external_.push_back(0.0);
  neighbors_.emplace_back();
  return id;
}

void TransitionGraph::add_edge(std::string_view src, std::string_view dst, double count) {
  if (!(count >= 0)) throw std::invalid_argument("TransitionGraph: negative edge weight");
  const std::size_t a = add_node(src);
  const std::size_t b = add_node(dst);
  out_[a][b] += count;
  if (a == b) return;
  auto link = [this](std::size_t x, std::size_t y) {
    auto& nb = neighbors_[x];
    auto pos = std::lower_bound(nb.begin(), nb.end(), y);
    if (pos == nb.end() || *pos != y) nb.insert(pos, y);
  };
  link(a, b);
  link(b, a);
}

void TransitionGraph::add_external(std::string_view dst, double count) {
  if (!(count >= 0)) throw std::invalid_argument("TransitionGraph: negative external count");
  external_[add_node(dst)] += count;
}

bool TransitionGraph::contains(std::string_view label) const { return index_.count(label) > 0; }

std::size_t TransitionGraph::index(std::string_view label) const {
  auto it = index_.find(label);
  if (it == index_.end()) throw std::invalid_argument("TransitionGraph: unknown node '" + std::string(label) + "'");
  return it->second;
}

TransitionGraph parse_clickstream_tsv(std::istream& in) {
  TransitionGraph g;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, '\t');) cols.push_back(c);
    if (cols.size() != 3 && cols.size() != 4)
      throw std::runtime_error("clickstream line " + std::to_string(lineno) + ": expected 3 or 4 tab-separated fields");
    double count = 0;
    try {
      count = std::stod(cols.back());
    } catch (const std::exception&) {
      throw std::runtime_error("clickstream line " + std::to_string(lineno) + ": bad count '" + cols.back() + "'");
    }
    if (cols[0].rfind("other-", 0) == 0) g.add_external(cols[1], count);
    else g.add_edge(cols[0], cols[1], count);
  }
  return g;
}

TransitionGraph load_clickstream_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_clickstream_tsv(in);
}

Matrix build_markov_from_graph(const TransitionGraph& graph, const std::vector<std::string>& universe,
                               double restart_prob) {
  if (!(restart_prob >= 0.0 && restart_prob <= 1.0))
    throw std::invalid_argument("build_markov_from_graph: restart probability must lie in [0,1]");
  const auto n = static_cast<Eigen::Index>(universe.size());
  std::vector<std::size_t> node(universe.size());
  std::map<std::size_t, Eigen::Index> position;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    node[i] = graph.index(universe[i]);
    position[node[i]] = static_cast<Eigen::Index>(i);
  }

  Vector p_other(n);
  for (Eigen::Index i = 0; i < n; ++i) p_other(i) = graph.external(node[static_cast<std::size_t>(i)]);
  if (!(p_other.sum() > 0)) throw std::invalid_argument("build_markov_from_graph: no external entries in the universe");
  p_other /= p_other.sum();

  Matrix F(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector col = Vector::Zero(n);
    const std::size_t src = node[static_cast<std::size_t>(i)];
    for (const auto& [dst, w] : graph.out_edges(src)) {
      if (dst == src) continue;
      if (auto it = position.find(dst); it != position.end()) col(it->second) += w;
    }
    const double mass = col.sum();
    F.col(i) = mass > 0 ? Vector((1.0 - restart_prob) * col / mass + restart_prob * p_other) : p_other;
  }
  return F;
}

std::vector<std::string> select_universe_from_graph(const TransitionGraph& graph,
                                                    const std::vector<std::string>& category_nodes,
                                                    std::size_t n, std::size_t max_swaps) {
  const std::size_t total = graph.size();
  if (n == 0) throw std::invalid_argument("select_universe_from_graph: n must be positive");
  if (total < n) throw std::invalid_argument("select_universe_from_graph: graph smaller than n");

  std::vector<char> inside(total, 0);
  for (const auto& label : category_nodes)
    if (graph.contains(label)) inside[graph.index(label)] = 1;
  // links[v] = number of neighbors of v currently inside.
  std::vector<std::size_t> links(total, 0);
  for (std::size_t v = 0; v < total; ++v)
    if (inside[v])
      for (std::size_t u : graph.neighbors(v)) ++links[u];
  std::size_t count = static_cast<std::size_t>(std::count(inside.begin(), inside.end(), 1));

  auto set_inside = [&](std::size_t v, bool in) {
    inside[v] = in ? 1 : 0;
    for (std::size_t u : graph.neighbors(v)) in ? ++links[u] : --links[u];
    in ? ++count : --count;
  };
  // Ties go to the smaller label.
  auto pick = [&](bool from_inside, bool smallest) {
    std::size_t best = total;
    for (std::size_t v = 0; v < total; ++v) {
      if (static_cast<bool>(inside[v]) != from_inside) continue;
      if (best == total) {
        best = v;
        continue;
      }
      const bool better = smallest ? links[v] < links[best] : links[v] > links[best];
      if (better || (links[v] == links[best] && graph.label(v) < graph.label(best))) best = v;
    }
    return best;
  };

  std::vector<std::size_t> weak;
  for (std::size_t v = 0; v < total; ++v)
    if (inside[v] && links[v] <= 1) weak.push_back(v);
  for (std::size_t v : weak) set_inside(v, false);

  while (count > n) set_inside(pick(true, true), false);
  while (count < n) set_inside(pick(false, false), true);

  for (std::size_t swaps = 0; swaps < max_swaps && count < total; ++swaps) {
    const std::size_t big = pick(false, false);
    const std::size_t cat = pick(true, true);
    const auto s_big = static_cast<long long>(links[big]);
    const auto s_cat = static_cast<long long>(links[cat]);
    if (!(s_cat <= 1 || s_cat < s_big - 2)) break;
    // A swap that does not add internal edges could undo itself next round.
    const auto& nb = graph.neighbors(big);
    const long long adjacent = std::binary_search(nb.begin(), nb.end(), cat) ? 1 : 0;
    if (s_big - adjacent <= s_cat) break;
    set_inside(cat, false);
    set_inside(big, true);
  }

  std::vector<std::string> out;
  for (std::size_t v = 0; v < total; ++v)
    if (inside[v]) out.push_back(graph.label(v));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ihop::pipeline
