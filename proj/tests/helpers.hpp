#pragma once

#include "mhkg/mhkg.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace testing {

using mhkg::Graph;
using mhkg::Matrix;
using mhkg::Vector;

// Erdos-Renyi graph; `connected` adds a random spanning tree first.
inline Graph random_graph(int n, double p, std::mt19937_64& rng, bool connected = false) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Graph::Edge> edges;
  if (connected) {
    for (int v = 1; v < n; ++v) {
      std::uniform_int_distribution<int> pick(0, v - 1);
      edges.emplace_back(pick(rng), v);
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (unit(rng) < p) edges.emplace_back(i, j);
  return Graph(n, edges);
}

inline Matrix random_matrix(mhkg::Index r, mhkg::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix m(r, c);
  for (mhkg::Index i = 0; i < r; ++i)
    for (mhkg::Index j = 0; j < c; ++j) m(i, j) = nd(rng);
  return m;
}

inline Matrix random_symmetric(mhkg::Index n, std::mt19937_64& rng) {
  Matrix m = random_matrix(n, n, rng);
  return (m + m.transpose()) / 2.0;
}

// D^{-1/2} (A + I) D^{-1/2} by explicit dense products.
inline Matrix brute_normalized_adjacency(const Graph& g) {
  const int n = g.num_nodes();
  Matrix a = Matrix::Identity(n, n);
  for (auto [i, j] : g.edges()) a(i, j) = a(j, i) = 1.0;
  Matrix dinv = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) dinv(i, i) = 1.0 / std::sqrt(a.row(i).sum());
  return dinv * a * dinv;
}

inline Graph path_graph(int n) {
  std::vector<Graph::Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, e);
}

inline Graph complete_graph(int n) {
  std::vector<Graph::Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, e);
}

// Two disjoint triangles.
inline Graph two_triangles() {
  return Graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace testing
