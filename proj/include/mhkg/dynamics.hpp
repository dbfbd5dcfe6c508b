#pragma once

#include "mhkg/filters.hpp"
#include "mhkg/spectral.hpp"
#include "mhkg/types.hpp"

#include <optional>
#include <string>

namespace mhkg {

// One propagation layer: a low/high filter pair sharing a weight matrix.
struct LayerSpec {
  FilterSpec low;
  FilterSpec high;
  Matrix weight;
};

enum class Verdict { LFD, HFD, Undetermined };
std::string to_string(Verdict v);

// Tr(H^T L H), clamped at zero.
template <typename Derived, typename DerivedL>
double dirichlet_energy(const Eigen::MatrixBase<Derived>& h, const Eigen::MatrixBase<DerivedL>& laplacian) {
  require(h.rows() == laplacian.rows() && laplacian.rows() == laplacian.cols(),
          "feature rows do not match the Laplacian");
  const double e = (h.transpose() * laplacian * h).trace();
  return e > 0.0 ? e : 0.0;
}

// The same energy evaluated in the eigenbasis: sum_i lambda_i ||(U^T H)_i||^2.
template <typename Derived>
double spectral_energy(const Spectrum& d, const Eigen::MatrixBase<Derived>& h_hat) {
  require(h_hat.rows() == d.size(), "spectral signal rows do not match the spectrum");
  const double e = d.eigenvalues.dot(h_hat.rowwise().squaredNorm());
  return e > 0.0 ? e : 0.0;
}

// H' = U diag(r_low + r_high) U^T H W
Matrix propagate(const LayerSpec& layer, const Spectrum& d, const Matrix& h);

struct SimulateOptions {
  double tolerance = 1e-3;
  // Scale s in the high-frequency target rho/2 * s; s = 2 targets the
  // Rayleigh value rho of the dominant eigenvector.
  double hfd_scale = 2.0;
};

struct DynamicsReport {
  int steps = 0;
  // energy[0] = E(H0); energy[t] = E(propagate(unit-norm state after t-1 steps)).
  Vector energy;
  // rayleigh[t] = E(H_t / ||H_t||_F)
  Vector rayleigh;
  Verdict verdict = Verdict::Undetermined;
  // Eigenvalue carrying the largest share of the final state.
  std::optional<double> dominant_frequency;
  // ||L H - rho H||_F for the final unit-norm state.
  double top_residual = 0.0;
  Matrix final_state;
};

DynamicsReport simulate(const LayerSpec& layer, const Spectrum& d, const Matrix& h0, int steps,
                        const SimulateOptions& opt = {});

// Steps after which the slowest non-dominant mode has decayed by `reduction`
// relative to the dominant one, for the response r (at least `min_steps`).
int steps_to_converge(const Vector& response, const Spectrum& d, double reduction = 1e-8,
                      int min_steps = 200, int max_steps = 1000000);

// H after m steps from the eigenpairs of a symmetric W and of the Laplacian.
Matrix closed_form_trajectory(const LayerSpec& layer, const Spectrum& d, const Matrix& h0, int m);

// Search grid 10^{-2 + j/25}, j = 0..150.
Vector zeta_grid();

// Smallest grid zeta making low + zeta*high strictly increasing with its
// maximum |response| attained only at the top eigenvalue (margin 1e-6).
double make_hfd_zeta(const FilterSpec& low, const FilterSpec& high, const Spectrum& d);
// Largest grid zeta making low + zeta*high strictly decreasing with its
// maximum |response| attained only at the bottom eigenvalue (margin 1e-6).
double make_lfd_zeta(const FilterSpec& low, const FilterSpec& high, const Spectrum& d);

struct DelayedHfd {
  Vector theta_low;
  Vector theta_high;
};

// theta_low = 0, theta_high_i = 0 for i < k and (1 - margin) lambda_i / high(lambda_i)
// otherwise, so the combined response is zero on the kernel and (1 - margin) lambda_i above it.
DelayedHfd delayed_hfd_construct(const Spectrum& d, Index k, double margin,
                                 const FilterFamily& high = FilterFamily::heat_high());

enum class ResponseCase { IncreasingSomewhere, ConstantSomewhere, DecreasingAboveLambda };
std::string to_string(ResponseCase c);

// Which of the three admissible shapes a non-negative, kernel-zeroed response
// pair takes on the non-zero eigenvalues.
ResponseCase response_case(const FilterSpec& s1, const FilterSpec& s2, const Spectrum& d);

}  // namespace mhkg
