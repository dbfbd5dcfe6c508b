#pragma once

#include "mhkg/graph.hpp"
#include "mhkg/split.hpp"
#include "mhkg/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace mhkg {

// Contextual stochastic block model: balanced classes, independent edges with
// probability p_intra (same class) or p_inter, and features equal to
// signal * e_class plus N(0, noise_sd^2) noise.
struct CsbmParams {
  int n_nodes = 200;
  int n_classes = 2;
  double p_intra = 0.05;
  double p_inter = 0.005;
  int feature_dim = 16;
  double signal = 1.0;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;
};

struct Dataset {
  Graph graph;
  Matrix features;
  std::vector<int> labels;
};

void validate(const CsbmParams& p);
Dataset csbm_generate(const CsbmParams& p);

// Node count comes from the labels (or features) when given, else from the edges.
Dataset load_dataset(const std::filesystem::path& edge_path,
                     const std::optional<std::filesystem::path>& feature_path,
                     const std::optional<std::filesystem::path>& label_path);
void save_dataset(const Dataset& ds, const std::filesystem::path& edge_path,
                  const std::filesystem::path& feature_path, const std::filesystem::path& label_path);

}  // namespace mhkg
