#pragma once

#include "mhkg/types.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace mhkg {

// Undirected simple graph. Edges are stored once as (min, max), sorted.
// Self-loops are not stored; normalization adds the identity explicitly.
class Graph {
 public:
  using Edge = std::pair<int, int>;

  Graph(int n_nodes, const std::vector<Edge>& edges,
        std::optional<std::vector<int>> labels = std::nullopt);

  int num_nodes() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int num_components() const { return k_; }
  // Component id of every node, numbered by first appearance.
  const std::vector<int>& component_ids() const { return component_; }
  const std::vector<int>& degrees() const { return degree_; }

  bool has_labels() const { return labels_.has_value(); }
  const std::vector<int>& labels() const;
  Graph with_labels(std::vector<int> labels) const;

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<int> degree_;
  std::vector<int> component_;
  int k_;
  std::optional<std::vector<int>> labels_;
};

inline Graph build_graph(int n, const std::vector<Graph::Edge>& edges) {
  return Graph(n, edges);
}

Matrix adjacency(const Graph& g);
// D^{-1/2}(A+I)D^{-1/2} with d_i = deg(i) + 1; exactly symmetric.
Matrix normalized_adjacency(const Graph& g);
// I - normalized_adjacency(g); exactly symmetric.
Matrix normalized_laplacian(const Graph& g);
// Fraction of edges whose endpoints share a label.
double homophily_level(const Graph& g);

}  // namespace mhkg
