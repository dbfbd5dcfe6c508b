#include "mhkg/synthdata.hpp"

#include "mhkg/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

namespace mhkg {

void validate(const CsbmParams& p) {
  require(p.n_classes >= 2, "cSBM needs at least two classes");
  require(p.n_nodes >= p.n_classes, "cSBM needs at least one node per class");
  require(p.p_intra >= 0.0 && p.p_intra <= 1.0, "p_intra must lie in [0, 1]");
  require(p.p_inter >= 0.0 && p.p_inter <= 1.0, "p_inter must lie in [0, 1]");
  require(p.feature_dim >= p.n_classes, "feature_dim must be at least the number of classes");
  require(p.signal >= 0.0 && std::isfinite(p.signal), "signal must be finite and non-negative");
  require(p.noise_sd > 0.0 && std::isfinite(p.noise_sd), "noise_sd must be finite and positive");
}

Dataset csbm_generate(const CsbmParams& p) {
  validate(p);
  std::mt19937_64 rng(p.seed);
  std::vector<int> labels(p.n_nodes);
  for (int i = 0; i < p.n_nodes; ++i) labels[i] = i % p.n_classes;
  std::shuffle(labels.begin(), labels.end(), rng);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Graph::Edge> edges;
  for (int i = 0; i < p.n_nodes; ++i) {
    for (int j = i + 1; j < p.n_nodes; ++j) {
      const double prob = labels[i] == labels[j] ? p.p_intra : p.p_inter;
      if (unit(rng) < prob) edges.emplace_back(i, j);
    }
  }

  std::normal_distribution<double> noise(0.0, p.noise_sd);
  Matrix x(p.n_nodes, p.feature_dim);
  for (int i = 0; i < p.n_nodes; ++i)
    for (int c = 0; c < p.feature_dim; ++c) x(i, c) = noise(rng);
  for (int i = 0; i < p.n_nodes; ++i) x(i, labels[i]) += p.signal;

  Graph g(p.n_nodes, edges, labels);
  return Dataset{std::move(g), std::move(x), std::move(labels)};
}

Split make_split(int n, const std::array<double, 3>& ratios, std::uint64_t seed) {
  require(n > 0, "split needs at least one node");
  for (double r : ratios) require(r >= 0.0, "split ratios must be non-negative");
  require(ratios[0] + ratios[1] + ratios[2] <= 1.0 + 1e-12, "split ratios sum above 1");
  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), Index(0));
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  const auto count = [&](double r) { return static_cast<Index>(std::llround(r * n)); };
  const Index n_train = std::min<Index>(count(ratios[0]), n);
  const Index n_val = std::min<Index>(count(ratios[1]), n - n_train);
  const Index n_test = std::min<Index>(count(ratios[2]), n - n_train - n_val);
  Split s;
  s.train.assign(perm.begin(), perm.begin() + n_train);
  s.val.assign(perm.begin() + n_train, perm.begin() + n_train + n_val);
  s.test.assign(perm.begin() + n_train + n_val, perm.begin() + n_train + n_val + n_test);
  validate_split(s, n);
  return s;
}

void validate_split(const Split& split, Index n) {
  require(!split.train.empty() && !split.val.empty() && !split.test.empty(),
          "every split partition must be non-empty");
  std::vector<char> seen(n, 0);
  for (const auto* part : {&split.train, &split.val, &split.test}) {
    for (Index v : *part) {
      require(v >= 0 && v < n, "split index out of range");
      require(!seen[v], "split partitions overlap at node " + std::to_string(v));
      seen[v] = 1;
    }
  }
}

Dataset load_dataset(const std::filesystem::path& edge_path,
                     const std::optional<std::filesystem::path>& feature_path,
                     const std::optional<std::filesystem::path>& label_path) {
  const EdgeList el = read_edge_list(edge_path);
  std::optional<std::vector<int>> labels;
  if (label_path) labels = read_labels(*label_path);
  Matrix x;
  if (feature_path) x = read_features(*feature_path);

  int n = el.n_nodes;
  if (labels) n = static_cast<int>(labels->size());
  else if (feature_path) n = static_cast<int>(x.rows());
  if (labels && feature_path) {
    require(x.rows() == n, "feature file has " + std::to_string(x.rows()) + " rows but the label file has " +
                               std::to_string(n) + " entries");
  }
  require(el.n_nodes <= n, "edge list references node " + std::to_string(el.n_nodes - 1) +
                               " but only " + std::to_string(n) + " nodes are defined");
  Graph g(n, el.edges, labels);
  return Dataset{std::move(g), std::move(x), labels.value_or(std::vector<int>{})};
}

void save_dataset(const Dataset& ds, const std::filesystem::path& edge_path,
                  const std::filesystem::path& feature_path, const std::filesystem::path& label_path) {
  std::ofstream e(edge_path), f(feature_path), l(label_path);
  if (!e || !f || !l) throw std::runtime_error("cannot open dataset output files");
  write_edge_list(e, ds.graph);
  write_features(f, ds.features);
  write_labels(l, ds.labels);
}

}  // namespace mhkg
