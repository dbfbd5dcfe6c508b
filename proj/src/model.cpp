#include "mhkg/model.hpp"

#include <cmath>
#include <random>

namespace mhkg {

std::string to_string(Activation a) { return a == Activation::None ? "none" : "relu"; }
std::string to_string(Mode m) { return m == Mode::GMHKG ? "gmhkg" : "mhkg"; }
std::string to_string(InitScheme s) { return s == InitScheme::Uniform ? "uniform" : "glorot"; }

TrainingDiverged::TrainingDiverged(int epoch)
    : NumericError("training diverged (non-finite loss) at epoch " + std::to_string(epoch)),
      epoch_(epoch) {}

Network init_network(const NetworkConfig& cfg, std::uint64_t seed) {
  require(cfg.dims.size() >= 2, "a network needs an input and an output dimension");
  for (int dim : cfg.dims) require(dim > 0, "layer dimensions must be positive");
  std::mt19937_64 rng(seed);
  Network net;
  net.activation = cfg.activation;
  net.mode = cfg.mode;
  net.train_theta = cfg.train_theta;
  net.train_weight = cfg.train_weight;
  net.tie_theta = cfg.tie_theta;
  for (std::size_t l = 0; l + 1 < cfg.dims.size(); ++l) {
    const int in = cfg.dims[l], out = cfg.dims[l + 1];
    const double a = cfg.init == InitScheme::Uniform ? 1.0 / std::sqrt(double(in))
                                                     : std::sqrt(6.0 / double(in + out));
    std::uniform_real_distribution<double> dist(-a, a);
    Matrix w(in, out);
    for (int i = 0; i < in; ++i)
      for (int j = 0; j < out; ++j) w(i, j) = dist(rng);
    net.layers.push_back(LayerSpec{cfg.low, cfg.high, std::move(w)});
  }
  return net;
}

namespace {

bool is_heat_pair(const FilterFamily& low, const FilterFamily& high) {
  if (low.is_squared() || high.is_squared()) return false;
  if (low.kind() == FamilyKind::HeatLow && high.kind() == FamilyKind::HeatHigh) return true;
  if (low.kind() == FamilyKind::ExpOfUser && high.kind() == FamilyKind::ExpOfUser) {
    const auto& a = low.coefficients();
    const auto& b = high.coefficients();
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != -b[i]) return false;
    return true;
  }
  return false;
}

struct LayerCache {
  Vector r_low, r_high, r;
  Matrix h_hat;  // U^T of the layer input
  Matrix m;      // h_hat W
  Matrix z;      // vertex-domain output before activation (unused on the spectral path)
};

struct Pass {
  std::vector<LayerCache> layers;
  Matrix logits;
  bool spectral = false;
};

Matrix relu(const Matrix& z) { return z.cwiseMax(0.0); }

Pass run_forward(const Network& net, const Spectrum& d, const Matrix& x) {
  validate_network(net, d);
  require(x.rows() == d.size(), "features have " + std::to_string(x.rows()) + " rows, expected " +
                                    std::to_string(d.size()));
  require(x.cols() == net.layers.front().weight.rows(),
          "feature dimension " + std::to_string(x.cols()) + " does not match the first layer (" +
              std::to_string(net.layers.front().weight.rows()) + ")");
  const Matrix& u = d.eigenvectors;
  Pass p;
  p.spectral = net.activation == Activation::None && net.mode == Mode::GMHKG;
  p.layers.resize(net.layers.size());
  const std::size_t last = net.layers.size() - 1;

  Matrix h = x;
  Matrix h_hat = u.transpose() * x;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& layer = net.layers[l];
    auto& c = p.layers[l];
    c.r_low = evaluate(layer.low, d);
    c.r_high = evaluate(layer.high, d);
    c.r = c.r_low + c.r_high;
    if (p.spectral) {
      c.h_hat = std::move(h_hat);
      c.m = c.h_hat * layer.weight;
      h_hat = c.r.asDiagonal() * c.m;
      continue;
    }
    c.h_hat = u.transpose() * h;
    c.m = c.h_hat * layer.weight;
    if (net.mode == Mode::MHKG) {
      c.z = u * (c.r_low.asDiagonal() * c.m) + u * (c.r_high.asDiagonal() * c.m);
    } else {
      c.z = u * (c.r.asDiagonal() * c.m);
    }
    h = (l == last || net.activation == Activation::None) ? c.z : relu(c.z);
  }
  p.logits = p.spectral ? Matrix(u * h_hat) : h;
  return p;
}

// Vector-Jacobian product of rescale_0_2 at v.
Vector rescale_vjp(const Vector& v, const Vector& g) {
  Index a = 0, b = 0;
  const double lo = v.minCoeff(&a);
  const double hi = v.maxCoeff(&b);
  const double span = hi - lo;
  if (!(span > 0.0)) return Vector::Zero(v.size());
  const double gsum = g.sum();
  const double gv = g.dot((v.array() - lo).matrix());
  Vector out = (2.0 / span) * g;
  out(a) += -(2.0 / span) * gsum + (2.0 / (span * span)) * gv;
  out(b) += -(2.0 / (span * span)) * gv;
  return out;
}

Vector theta_gradient(const FilterSpec& spec, const Spectrum& d, const Vector& dr) {
  const Vector f = spec.family(d.eigenvalues);
  Vector g = dr;
  if (spec.rescale) g = rescale_vjp(spec.gamma * spec.theta.cwiseProduct(f), dr);
  return spec.gamma * f.cwiseProduct(g);
}

}  // namespace

void validate_network(const Network& net, const Spectrum& d) {
  require(!net.layers.empty(), "network has no layers");
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& layer = net.layers[l];
    require(layer.low.theta.size() == d.size() && layer.high.theta.size() == d.size(),
            "layer " + std::to_string(l) + " gains do not match the spectrum size");
    require(layer.weight.size() > 0 && all_finite(layer.weight),
            "layer " + std::to_string(l) + " weight is empty or non-finite");
    if (l > 0) {
      require(layer.weight.rows() == net.layers[l - 1].weight.cols(),
              "layer " + std::to_string(l) + " input dimension does not match the previous layer");
    }
    if (net.mode == Mode::MHKG) {
      require(is_heat_pair(layer.low.family, layer.high.family),
              "the two-branch heat mode needs the filter pair (e^{-f}, e^{f})");
    }
  }
}

Matrix forward(const Network& net, const Spectrum& d, const Matrix& x) {
  return run_forward(net, d, x).logits;
}

LossAndGrads loss_and_grads(const Network& net, const Spectrum& d, const Matrix& x,
                            const std::vector<int>& labels, const std::vector<Index>& mask,
                            double weight_decay) {
  require(!mask.empty(), "loss mask selects no nodes");
  require(static_cast<Index>(labels.size()) == d.size(), "label count does not match the graph");
  Pass p = run_forward(net, d, x);
  const Matrix& logits = p.logits;
  const Index classes = logits.cols();

  LossAndGrads out;
  Matrix g = Matrix::Zero(logits.rows(), classes);
  const double inv = 1.0 / static_cast<double>(mask.size());
  for (Index v : mask) {
    require(v >= 0 && v < logits.rows(), "mask index out of range");
    const int y = labels[v];
    require(y >= 0 && y < classes, "label " + std::to_string(y) + " out of range for " +
                                       std::to_string(classes) + " classes");
    const double mx = logits.row(v).maxCoeff();
    Eigen::RowVectorXd e = (logits.row(v).array() - mx).exp();
    const double s = e.sum();
    out.loss += (std::log(s) + mx - logits(v, y)) * inv;
    g.row(v) = e / s * inv;
    g(v, y) -= inv;
  }
  for (const auto& layer : net.layers) out.loss += weight_decay * layer.weight.squaredNorm();

  const Matrix& u = d.eigenvectors;
  const std::size_t n_layers = net.layers.size();
  out.grads.theta_low.resize(n_layers);
  out.grads.theta_high.resize(n_layers);
  out.grads.weight.resize(n_layers);

  Matrix g_hat = u.transpose() * g;
  for (std::size_t i = n_layers; i-- > 0;) {
    const auto& layer = net.layers[i];
    const auto& c = p.layers[i];
    if (!p.spectral) {
      if (i + 1 < n_layers && net.activation == Activation::ReLU) {
        g = g.cwiseProduct((c.z.array() > 0.0).cast<double>().matrix());
      }
      g_hat = u.transpose() * g;
    }
    const Vector dr = g_hat.cwiseProduct(c.m).rowwise().sum();
    out.grads.weight[i] = (c.r.asDiagonal() * c.h_hat).transpose() * g_hat +
                          2.0 * weight_decay * layer.weight;
    out.grads.theta_low[i] = theta_gradient(layer.low, d, dr);
    out.grads.theta_high[i] = theta_gradient(layer.high, d, dr);
    if (i == 0) break;
    Matrix dh_hat = c.r.asDiagonal() * (g_hat * layer.weight.transpose());
    if (p.spectral) {
      g_hat = std::move(dh_hat);
    } else {
      g = u * dh_hat;
    }
  }
  out.logits = std::move(p.logits);
  return out;
}

double accuracy(const Matrix& logits, const std::vector<int>& labels, const std::vector<Index>& idx) {
  if (idx.empty()) return 0.0;
  std::size_t hit = 0;
  for (Index v : idx) {
    Index arg = 0;
    logits.row(v).maxCoeff(&arg);
    hit += (arg == labels[v]);
  }
  return static_cast<double>(hit) / static_cast<double>(idx.size());
}

TrainResult train(Network net, const Spectrum& d, const Matrix& x, const std::vector<int>& labels,
                  const Split& split, const TrainConfig& cfg) {
  require(cfg.learning_rate > 0.0, "learning rate must be positive");
  require(cfg.weight_decay >= 0.0, "weight decay must be non-negative");
  require(cfg.max_epochs >= 1, "training needs at least one epoch");
  require(cfg.patience >= 0, "patience must be non-negative");
  validate_split(split, d.size());
  if (net.tie_theta) {
    for (auto& layer : net.layers) {
      layer.low.theta = net.layers.front().low.theta;
      layer.high.theta = net.layers.front().high.theta;
    }
  }

  TrainResult res;
  res.best_val_accuracy = -1.0;
  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    auto lg = loss_and_grads(net, d, x, labels, split.train, cfg.weight_decay);
    if (!std::isfinite(lg.loss) || !all_finite(lg.logits)) throw TrainingDiverged(epoch);
    EpochMetrics m;
    m.epoch = epoch;
    m.train_loss = lg.loss;
    m.train_accuracy = accuracy(lg.logits, labels, split.train);
    m.val_accuracy = accuracy(lg.logits, labels, split.val);
    m.test_accuracy = accuracy(lg.logits, labels, split.test);
    res.trace.push_back(m);
    if (m.val_accuracy > res.best_val_accuracy) {
      res.best_val_accuracy = m.val_accuracy;
      res.best_epoch = epoch;
      res.test_accuracy = m.test_accuracy;
      res.network = net;
    }
    if (cfg.patience > 0 && epoch - res.best_epoch >= cfg.patience) break;

    const double lr = cfg.learning_rate;
    if (net.train_weight) {
      for (std::size_t l = 0; l < net.layers.size(); ++l) net.layers[l].weight -= lr * lg.grads.weight[l];
    }
    if (net.train_theta) {
      if (net.tie_theta) {
        Vector gl = Vector::Zero(d.size()), gh = Vector::Zero(d.size());
        for (std::size_t l = 0; l < net.layers.size(); ++l) {
          gl += lg.grads.theta_low[l];
          gh += lg.grads.theta_high[l];
        }
        for (auto& layer : net.layers) {
          layer.low.theta -= lr * gl;
          layer.high.theta -= lr * gh;
        }
      } else {
        for (std::size_t l = 0; l < net.layers.size(); ++l) {
          net.layers[l].low.theta -= lr * lg.grads.theta_low[l];
          net.layers[l].high.theta -= lr * lg.grads.theta_high[l];
        }
      }
    }
  }
  return res;
}

}  // namespace mhkg
