#include "mhkg/graph.hpp"

#include "mhkg/union_find.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mhkg {

Graph::Graph(int n_nodes, const std::vector<Edge>& edges,
             std::optional<std::vector<int>> labels)
    : n_(n_nodes) {
  require(n_nodes > 0, "graph must have at least one node");
  edges_.reserve(edges.size());
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) {
      throw ValidationError("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") has an endpoint outside [0, " + std::to_string(n_) + ")");
    }
    if (i == j) {
      throw ValidationError("self-loop at node " + std::to_string(i) +
                            " is not allowed; normalization adds it");
    }
    edges_.emplace_back(std::min(i, j), std::max(i, j));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  degree_.assign(n_, 0);
  UnionFind uf(n_);
  for (auto [i, j] : edges_) {
    ++degree_[i];
    ++degree_[j];
    uf.unite(i, j);
  }
  k_ = uf.count();

  component_.assign(n_, -1);
  std::vector<int> root_id(n_, -1);
  int next = 0;
  for (int v = 0; v < n_; ++v) {
    int r = uf.find(v);
    if (root_id[r] < 0) root_id[r] = next++;
    component_[v] = root_id[r];
  }

  if (labels) {
    require(static_cast<int>(labels->size()) == n_,
            "label count " + std::to_string(labels->size()) + " does not match node count " +
                std::to_string(n_));
    for (int c : *labels) require(c >= 0, "labels must be non-negative class ids");
    labels_ = std::move(labels);
  }
}

const std::vector<int>& Graph::labels() const {
  if (!labels_) throw ValidationError("graph has no labels");
  return *labels_;
}

Graph Graph::with_labels(std::vector<int> labels) const {
  return Graph(n_, edges_, std::move(labels));
}

Matrix adjacency(const Graph& g) {
  Matrix a = Matrix::Zero(g.num_nodes(), g.num_nodes());
  for (auto [i, j] : g.edges()) {
    a(i, j) = 1.0;
    a(j, i) = 1.0;
  }
  return a;
}

Matrix normalized_adjacency(const Graph& g) {
  const int n = g.num_nodes();
  Vector inv_sqrt(n);
  for (int i = 0; i < n; ++i) inv_sqrt(i) = 1.0 / std::sqrt(g.degrees()[i] + 1.0);
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = inv_sqrt(i) * inv_sqrt(i);
  for (auto [i, j] : g.edges()) {
    const double w = inv_sqrt(i) * inv_sqrt(j);
    a(i, j) = w;
    a(j, i) = w;
  }
  return a;
}

Matrix normalized_laplacian(const Graph& g) {
  Matrix l = -normalized_adjacency(g);
  l.diagonal().array() += 1.0;
  return l;
}

double homophily_level(const Graph& g) {
  const auto& y = g.labels();
  require(!g.edges().empty(), "homophily is undefined for a graph without edges");
  std::size_t same = 0;
  for (auto [i, j] : g.edges()) same += (y[i] == y[j]);
  return static_cast<double>(same) / static_cast<double>(g.edges().size());
}

}  // namespace mhkg
