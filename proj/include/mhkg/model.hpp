#pragma once

#include "mhkg/dynamics.hpp"
#include "mhkg/filters.hpp"
#include "mhkg/spectral.hpp"
#include "mhkg/split.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mhkg {

enum class Activation { None, ReLU };
// GMHKG filters with the summed response; MHKG keeps the two heat-kernel
// branches as separate terms and requires the pair (e^{-f}, e^{f}).
enum class Mode { GMHKG, MHKG };
// Uniform: U(-1/sqrt(fan_in), 1/sqrt(fan_in)). Glorot: U(-a, a), a = sqrt(6 / (fan_in + fan_out)).
enum class InitScheme { Uniform, Glorot };

std::string to_string(Activation a);
std::string to_string(Mode m);
std::string to_string(InitScheme s);

struct Network {
  std::vector<LayerSpec> layers;
  Activation activation = Activation::ReLU;  // between layers, never after the last
  Mode mode = Mode::GMHKG;
  bool train_theta = true;
  bool train_weight = true;
  bool tie_theta = false;  // one gain vector pair shared by every layer
};

struct NetworkConfig {
  std::vector<int> dims;  // input, hidden..., classes
  FilterSpec low;
  FilterSpec high;
  Activation activation = Activation::ReLU;
  Mode mode = Mode::GMHKG;
  InitScheme init = InitScheme::Uniform;
  bool train_theta = true;
  bool train_weight = true;
  bool tie_theta = false;
};

Network init_network(const NetworkConfig& cfg, std::uint64_t seed);
void validate_network(const Network& net, const Spectrum& d);

Matrix forward(const Network& net, const Spectrum& d, const Matrix& x);

struct Gradients {
  std::vector<Vector> theta_low;
  std::vector<Vector> theta_high;
  std::vector<Matrix> weight;
};

struct LossAndGrads {
  double loss = 0.0;
  Gradients grads;
  Matrix logits;
};

// Mean softmax cross-entropy over `mask` plus weight_decay * sum ||W||_F^2.
LossAndGrads loss_and_grads(const Network& net, const Spectrum& d, const Matrix& x,
                            const std::vector<int>& labels, const std::vector<Index>& mask,
                            double weight_decay);

double accuracy(const Matrix& logits, const std::vector<int>& labels, const std::vector<Index>& idx);

struct TrainConfig {
  double learning_rate = 0.01;
  double weight_decay = 0.0;
  int max_epochs = 200;
  std::uint64_t seed = 0;  // initialization seed used by callers that build the network
  int patience = 0;        // epochs without validation improvement before stopping; 0 = never
};

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_accuracy = 0.0;
  double test_accuracy = 0.0;
};

struct TrainResult {
  Network network;  // parameters at the best validation epoch
  std::vector<EpochMetrics> trace;
  int best_epoch = 0;
  double best_val_accuracy = 0.0;
  double test_accuracy = 0.0;  // at the best validation epoch
};

class TrainingDiverged : public NumericError {
 public:
  explicit TrainingDiverged(int epoch);
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

// Full-batch gradient descent.
TrainResult train(Network net, const Spectrum& d, const Matrix& x, const std::vector<int>& labels,
                  const Split& split, const TrainConfig& cfg);

}  // namespace mhkg
