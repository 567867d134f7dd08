#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gelfand/linalg.hpp"

namespace gelfand {

struct Edge {
  std::string u;
  std::string v;
  double weight;
};

// Finite weighted graph with symmetric nonnegative weights. Vertex labels are
// normalized to contiguous 0-based indices at construction; the original
// labels are kept for reporting. Immutable once built.
class WeightedGraph {
 public:
  std::size_t size() const { return labels_.size(); }
  double weight(std::size_t i, std::size_t j) const { return w_(i, j); }
  double degree(std::size_t i) const { return deg_[i]; }
  const Vector& degrees() const { return deg_; }
  const Matrix& weights() const { return w_; }

  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> index_of(const std::string& label) const;

  // transition probability w_ij / d_i
  double transition(std::size_t i, std::size_t j) const { return w_(i, j) / deg_[i]; }

  friend WeightedGraph build_graph(const std::vector<Edge>& edges,
                                   const std::vector<std::string>& declared_vertices);

 private:
  Matrix w_;
  Vector deg_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Builds a graph from an edge list. Labels get indices in order of first
// appearance (declared vertices first). Rejects nonpositive weights,
// duplicate edges and vertices left with zero degree.
WeightedGraph build_graph(const std::vector<Edge>& edges,
                          const std::vector<std::string>& declared_vertices = {});

// convenience for integer-labelled graphs
WeightedGraph build_graph(const std::vector<std::tuple<int, int, double>>& edges);

}  // namespace gelfand
