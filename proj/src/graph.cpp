#include "gelfand/graph.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace gelfand {

std::optional<std::size_t> WeightedGraph::index_of(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

WeightedGraph build_graph(const std::vector<Edge>& edges,
                          const std::vector<std::string>& declared_vertices) {
  if (edges.empty()) throw std::invalid_argument("build_graph: no edges");

  WeightedGraph g;
  auto intern = [&g](const std::string& label) -> std::size_t {
    auto it = g.index_.find(label);
    if (it != g.index_.end()) return it->second;
    const std::size_t id = g.labels_.size();
    g.index_.emplace(label, id);
    g.labels_.push_back(label);
    return id;
  };

  for (const auto& v : declared_vertices) intern(v);
  for (const auto& e : edges) {
    intern(e.u);
    intern(e.v);
  }

  const std::size_t n = g.labels_.size();
  g.w_ = Matrix(n, n);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges) {
    if (!(e.weight > 0.0))
      throw std::invalid_argument("build_graph: nonpositive weight on edge " + e.u + "-" + e.v);
    const std::size_t a = *g.index_of(e.u), b = *g.index_of(e.v);
    const std::pair<std::size_t, std::size_t> key = std::minmax(a, b);
    if (!seen.insert(key).second)
      throw std::invalid_argument("build_graph: duplicate edge " + e.u + "-" + e.v);
    g.w_(a, b) = e.weight;
    g.w_(b, a) = e.weight;  // loops (a == b) land here once
  }

  g.deg_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < n; ++j) d += g.w_(i, j);
    if (!(d > 0.0))
      throw std::invalid_argument("build_graph: vertex '" + g.labels_[i] + "' has zero degree");
    g.deg_[i] = d;
  }
  return g;
}

WeightedGraph build_graph(const std::vector<std::tuple<int, int, double>>& edges) {
  std::vector<Edge> named;
  named.reserve(edges.size());
  for (const auto& [u, v, w] : edges)
    named.push_back({std::to_string(u), std::to_string(v), w});
  return build_graph(named);
}

}  // namespace gelfand
