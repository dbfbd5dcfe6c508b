#include "mhkg/dynamics.hpp"

#include <cmath>
#include <limits>

namespace mhkg {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::LFD: return "LFD";
    case Verdict::HFD: return "HFD";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

std::string to_string(ResponseCase c) {
  switch (c) {
    case ResponseCase::IncreasingSomewhere: return "IncreasingSomewhere";
    case ResponseCase::ConstantSomewhere: return "ConstantSomewhere";
    case ResponseCase::DecreasingAboveLambda: return "DecreasingAboveLambda";
  }
  return "IncreasingSomewhere";
}

namespace {

void check_layer(const LayerSpec& layer, const Spectrum& d, const Matrix& h) {
  require(h.rows() == d.size(), "feature matrix has " + std::to_string(h.rows()) +
                                    " rows, expected " + std::to_string(d.size()));
  require(layer.weight.rows() == h.cols(), "weight has " + std::to_string(layer.weight.rows()) +
                                               " rows, features have " +
                                               std::to_string(h.cols()) + " columns");
  require(all_finite(layer.weight), "weight matrix has non-finite entries");
}

// Indices whose eigenvalue lies in the same cluster as eigenvalue `target`.
bool same_cluster(const Spectrum& d, Index i, double target) {
  return std::abs(d.eigenvalues(i) - target) <= 1e-10;
}

// |r| at the cluster of `target` exceeds |r| elsewhere by at least `margin`.
bool uniquely_dominant(const Vector& r, const Spectrum& d, double target, double margin) {
  double inside = 0.0, outside = 0.0;
  for (Index i = 0; i < r.size(); ++i) {
    if (same_cluster(d, i, target)) inside = std::max(inside, std::abs(r(i)));
    else outside = std::max(outside, std::abs(r(i)));
  }
  return inside > outside + margin;
}

}  // namespace

Matrix propagate(const LayerSpec& layer, const Spectrum& d, const Matrix& h) {
  check_layer(layer, d, h);
  const Vector r = combined_response(layer.low, layer.high, d);
  return spectral_filter(d, r, h) * layer.weight;
}

DynamicsReport simulate(const LayerSpec& layer, const Spectrum& d, const Matrix& h0, int steps,
                        const SimulateOptions& opt) {
  require(steps >= 1, "simulation needs at least one step");
  check_layer(layer, d, h0);
  require(layer.weight.rows() == layer.weight.cols(), "simulation needs a square weight matrix");
  const double n0 = h0.norm();
  require(n0 > 0.0 && std::isfinite(n0), "initial state must be non-zero and finite");

  const Vector r = combined_response(layer.low, layer.high, d);
  DynamicsReport rep;
  rep.steps = steps;
  rep.energy.resize(steps + 1);
  rep.rayleigh.resize(steps + 1);

  Matrix x = graph_fourier(d, h0);
  rep.energy(0) = spectral_energy(d, x);
  x /= n0;
  rep.rayleigh(0) = spectral_energy(d, x);
  bool zero = false;
  for (int t = 1; t <= steps; ++t) {
    if (zero) {
      rep.energy(t) = 0.0;
      rep.rayleigh(t) = 0.0;
      continue;
    }
    Matrix y = r.asDiagonal() * x * layer.weight;
    const double nrm = y.norm();
    if (!std::isfinite(nrm)) {
      throw NumericError("state overflowed at step " + std::to_string(t) + " despite renormalization");
    }
    rep.energy(t) = spectral_energy(d, y);
    if (nrm == 0.0) {
      zero = true;
      x.setZero();
      rep.rayleigh(t) = 0.0;
      continue;
    }
    x = y / nrm;
    rep.rayleigh(t) = spectral_energy(d, x);
  }

  rep.final_state = inverse_graph_fourier(d, x);
  const double final_r = rep.rayleigh(steps);
  if (zero || final_r < opt.tolerance) {
    rep.verdict = Verdict::LFD;
  } else if (std::abs(final_r - d.rho / 2.0 * opt.hfd_scale) < opt.tolerance) {
    rep.verdict = Verdict::HFD;
  } else {
    rep.verdict = Verdict::Undetermined;
  }
  if (!zero) {
    Index top = 0;
    x.rowwise().squaredNorm().maxCoeff(&top);
    rep.dominant_frequency = d.eigenvalues(top);
  }
  rep.top_residual =
      ((d.eigenvalues.array() - d.rho).matrix().asDiagonal() * x).norm();
  return rep;
}

int steps_to_converge(const Vector& response, const Spectrum& d, double reduction, int min_steps,
                      int max_steps) {
  require(response.size() == d.size(), "response length does not match the spectrum");
  const double peak = response.cwiseAbs().maxCoeff();
  if (peak == 0.0) return min_steps;
  double second = 0.0;
  for (Index i = 0; i < response.size(); ++i) {
    const double a = std::abs(response(i));
    if (a < peak - 1e-12) second = std::max(second, a);
  }
  if (second == 0.0) return min_steps;
  const double m = std::ceil(std::log(reduction) / std::log(second / peak));
  if (!(m < max_steps)) return max_steps;
  return std::max(min_steps, static_cast<int>(m));
}

Matrix closed_form_trajectory(const LayerSpec& layer, const Spectrum& d, const Matrix& h0, int m) {
  require(m >= 0, "step count must be non-negative");
  check_layer(layer, d, h0);
  const Matrix& w = layer.weight;
  require(w.rows() == w.cols(), "closed form needs a square weight matrix");
  const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
  require((w - w.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
          "closed form needs a symmetric weight matrix");
  const auto wd = eig_sym(w);
  const Vector r = combined_response(layer.low, layer.high, d);

  // Coefficients of H0 in the product basis u_i phi_k^T, each scaled by (r_i mu_k)^m.
  Matrix c = d.eigenvectors.transpose() * h0 * wd.eigenvectors;
  for (Index i = 0; i < c.rows(); ++i)
    for (Index k = 0; k < c.cols(); ++k) c(i, k) *= std::pow(r(i) * wd.eigenvalues(k), m);
  return d.eigenvectors * c * wd.eigenvectors.transpose();
}

Vector zeta_grid() {
  Vector z(151);
  for (int j = 0; j <= 150; ++j) z(j) = std::pow(10.0, -2.0 + j / 25.0);
  return z;
}

double make_hfd_zeta(const FilterSpec& low, const FilterSpec& high, const Spectrum& d) {
  require(high.family.shape() == Monotonicity::Increasing,
          "high-pass family '" + high.family.name() + "' is not increasing on [0, 2]");
  const Vector rl = evaluate(low, d);
  const Vector rh = evaluate(high, d);
  const Vector z = zeta_grid();
  for (Index j = 0; j < z.size(); ++j) {
    const Vector r = rl + z(j) * rh;
    if (strictly_increasing(r, d.eigenvalues) && uniquely_dominant(r, d, d.rho, 1e-6)) return z(j);
  }
  throw ValidationError("no zeta up to 1e4 makes the combined response high-frequency dominant");
}

double make_lfd_zeta(const FilterSpec& low, const FilterSpec& high, const Spectrum& d) {
  require(low.family.shape() == Monotonicity::Decreasing,
          "low-pass family '" + low.family.name() + "' is not decreasing on [0, 2]");
  const Vector rl = evaluate(low, d);
  const Vector rh = evaluate(high, d);
  const Vector z = zeta_grid();
  for (Index j = z.size() - 1; j >= 0; --j) {
    const Vector r = rl + z(j) * rh;
    if (strictly_decreasing(r, d.eigenvalues) && uniquely_dominant(r, d, d.eigenvalues(0), 1e-6))
      return z(j);
  }
  throw ValidationError("no zeta down to 1e-2 makes the combined response low-frequency dominant");
}

DelayedHfd delayed_hfd_construct(const Spectrum& d, Index k, double margin,
                                 const FilterFamily& high) {
  const Index n = d.size();
  require(margin >= 0.0 && margin < 1.0, "delay margin must lie in [0, 1)");
  require(k >= 0 && k <= n, "kernel size out of range");
  DelayedHfd out{Vector::Zero(n), Vector::Zero(n)};
  for (Index i = k; i < n; ++i) {
    const double lambda = d.eigenvalues(i);
    require(lambda > 1e-12, "eigenvalue " + std::to_string(i) + " beyond the kernel is not positive");
    const double g = high(lambda);
    require(g > 0.0 && std::isfinite(g),
            "high-pass family must be positive on the non-zero eigenvalues");
    out.theta_high(i) = (1.0 - margin) * lambda / g;
  }
  return out;
}

ResponseCase response_case(const FilterSpec& s1, const FilterSpec& s2, const Spectrum& d) {
  require((s1.theta.array() >= 0.0).all() && (s2.theta.array() >= 0.0).all(),
          "gains must be non-negative");
  const Vector r = combined_response(s1, s2, d);
  const Index k = zero_multiplicity(d);
  for (Index i = 0; i < k; ++i) {
    require(std::abs(r(i)) <= 1e-12, "response must vanish on the zero eigenvalues");
  }
  if (k == r.size()) return ResponseCase::ConstantSomewhere;
  switch (monotonicity(r, d.eigenvalues, k)) {
    case Monotonicity::Increasing:
    case Monotonicity::Neither: return ResponseCase::IncreasingSomewhere;
    case Monotonicity::Constant: return ResponseCase::ConstantSomewhere;
    case Monotonicity::Decreasing: break;
  }
  for (Index i = k; i < r.size(); ++i) {
    if (r(i) > d.eigenvalues(i) + 1e-10) return ResponseCase::DecreasingAboveLambda;
  }
  // Decreasing and below lambda: the step from the zeroed kernel up to r_k is
  // the increasing segment.
  return ResponseCase::IncreasingSomewhere;
}

}  // namespace mhkg
