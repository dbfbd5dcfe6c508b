#pragma once

#include "mhkg/filters.hpp"
#include "mhkg/model.hpp"
#include "mhkg/spectral.hpp"
#include "mhkg/synthdata.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace mhkg {

struct FilterPair {
  FilterSpec low;
  FilterSpec high;
};

// The four named filter configurations compared at depth. Bump the version
// whenever a definition changes.
enum class Preset { LFD, HFDIncOSQ, DHFDIncOSQ, DHFDDecOSQ };
inline constexpr int kPresetVersion = 1;

std::string to_string(Preset p);
Preset parse_preset(const std::string& name);
const std::array<Preset, 4>& all_presets();

// Low branch e^{-lambda} with gain 1, high branch sin(lambda/8) with gain zeta.
FilterPair zeta_pair(double zeta, Index n);

// Preset filters on the spectrum with kernel size k, scaled to peak |response| 1:
//   LFD          e^{-l} : sin(l/8) gains 2 : 1 (decreasing response)
//   HFD+incOSQ   gains 0.2 : 1 (maximum at rho)
//   DHFD+incOSQ  as HFD+incOSQ with the first k gains zeroed
//   DHFD+decOSQ  delayed construction with response lambda_i / rho (<= lambda_i), zero on the kernel
FilterPair preset_pair(Preset p, const Spectrum& d, Index k);

FilterPair scale_to_unit_peak(FilterPair pair, const Spectrum& d);

struct ClassificationSetup {
  int depth = 2;
  int hidden = 16;
  Activation activation = Activation::ReLU;
  InitScheme init = InitScheme::Uniform;
  Mode mode = Mode::GMHKG;
  bool train_theta = false;
  bool train_weight = true;
  bool tie_theta = false;
  TrainConfig train;
};

int num_classes(const std::vector<int>& labels);

TrainResult run_classification(const Dataset& ds, const Spectrum& d, const Split& split,
                               const FilterPair& filters, const ClassificationSetup& setup,
                               std::uint64_t init_seed);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation
};
MeanSd mean_sd(const std::vector<double>& xs);

// Rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace mhkg
