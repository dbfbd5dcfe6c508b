#include "mhkg/experiment.hpp"

#include "mhkg/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mhkg {

std::string to_string(Preset p) {
  switch (p) {
    case Preset::LFD: return "LFD";
    case Preset::HFDIncOSQ: return "HFD+incOSQ";
    case Preset::DHFDIncOSQ: return "DHFD+incOSQ";
    case Preset::DHFDDecOSQ: return "DHFD+decOSQ";
  }
  return "LFD";
}

Preset parse_preset(const std::string& name) {
  for (Preset p : all_presets())
    if (to_string(p) == name) return p;
  throw ValidationError("unknown preset '" + name + "' (expected LFD, HFD+incOSQ, DHFD+incOSQ or DHFD+decOSQ)");
}

const std::array<Preset, 4>& all_presets() {
  static const std::array<Preset, 4> presets{Preset::LFD, Preset::HFDIncOSQ, Preset::DHFDIncOSQ,
                                             Preset::DHFDDecOSQ};
  return presets;
}

FilterPair zeta_pair(double zeta, Index n) {
  require(std::isfinite(zeta), "zeta must be finite");
  return {FilterSpec::uniform(FilterFamily::heat_low(), n, 1.0),
          FilterSpec::uniform(FilterFamily::sine_eighth(), n, zeta)};
}

FilterPair scale_to_unit_peak(FilterPair pair, const Spectrum& d) {
  const double peak = combined_response(pair.low, pair.high, d).cwiseAbs().maxCoeff();
  require(peak > 0.0, "cannot normalize an all-zero response");
  pair.low.theta /= peak;
  pair.high.theta /= peak;
  return pair;
}

FilterPair preset_pair(Preset p, const Spectrum& d, Index k) {
  const Index n = d.size();
  require(k >= 0 && k < n, "kernel size must leave at least one non-zero eigenvalue");
  const auto low = FilterFamily::heat_low();
  const auto high = FilterFamily::sine_eighth();
  switch (p) {
    case Preset::LFD:
      return scale_to_unit_peak({FilterSpec::uniform(low, n, 2.0), FilterSpec::uniform(high, n, 1.0)}, d);
    case Preset::HFDIncOSQ:
      return scale_to_unit_peak({FilterSpec::uniform(low, n, 0.2), FilterSpec::uniform(high, n, 1.0)}, d);
    case Preset::DHFDIncOSQ: {
      FilterPair pair{FilterSpec::uniform(low, n, 0.2), FilterSpec::uniform(high, n, 1.0)};
      pair.low.theta.head(k).setZero();
      pair.high.theta.head(k).setZero();
      return scale_to_unit_peak(pair, d);
    }
    case Preset::DHFDDecOSQ: {
      require(d.rho > 0.0, "the delayed preset needs a graph with edges");
      const double margin = std::max(0.0, 1.0 - 1.0 / d.rho);
      const auto thetas = delayed_hfd_construct(d, k, margin, high);
      return {FilterSpec{low, thetas.theta_low, 1.0, false}, FilterSpec{high, thetas.theta_high, 1.0, false}};
    }
  }
  throw ValidationError("unknown preset");
}

int num_classes(const std::vector<int>& labels) {
  require(!labels.empty(), "dataset has no labels");
  return *std::max_element(labels.begin(), labels.end()) + 1;
}

TrainResult run_classification(const Dataset& ds, const Spectrum& d, const Split& split,
                               const FilterPair& filters, const ClassificationSetup& setup,
                               std::uint64_t init_seed) {
  require(setup.depth >= 1, "depth must be at least 1");
  require(setup.hidden >= 1, "hidden width must be positive");
  NetworkConfig cfg;
  cfg.dims.push_back(static_cast<int>(ds.features.cols()));
  for (int l = 1; l < setup.depth; ++l) cfg.dims.push_back(setup.hidden);
  cfg.dims.push_back(num_classes(ds.labels));
  cfg.low = filters.low;
  cfg.high = filters.high;
  cfg.activation = setup.activation;
  cfg.mode = setup.mode;
  cfg.init = setup.init;
  cfg.train_theta = setup.train_theta;
  cfg.train_weight = setup.train_weight;
  cfg.tie_theta = setup.tie_theta;
  return train(init_network(cfg, init_seed), d, ds.features, ds.labels, split, setup.train);
}

MeanSd mean_sd(const std::vector<double>& xs) {
  MeanSd out;
  if (xs.empty()) return out;
  out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.sd = std::sqrt(ss / (xs.size() - 1));
  }
  return out;
}

namespace {

std::vector<double> ranks(const std::vector<double>& xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
  std::vector<double> r(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double avg = (i + j) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  require(a.size() == b.size() && a.size() >= 2, "rank correlation needs two equal-length samples");
  const auto ra = ranks(a), rb = ranks(b);
  const Eigen::Map<const Vector> x(ra.data(), ra.size()), y(rb.data(), rb.size());
  const Vector xc = x.array() - x.mean();
  const Vector yc = y.array() - y.mean();
  const double denom = xc.norm() * yc.norm();
  return denom > 0.0 ? xc.dot(yc) / denom : 0.0;
}

}  // namespace mhkg
