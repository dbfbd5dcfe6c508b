#pragma once

#include "mhkg/dynamics.hpp"
#include "mhkg/filters.hpp"
#include "mhkg/graph.hpp"
#include "mhkg/spectral.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace mhkg {

// Sentinel for a pair that no path of length ell connects: the bound is zero.
inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

struct SensitivityReport {
  Matrix a_low;   // I - U diag(r_low) U^T
  Matrix a_high;  // I - U diag(r_high) U^T
  Matrix s;       // a_low + a_high
  // Set when some entry of S is below -1e-12: the bound then loses its guarantee.
  bool negative_entries = false;

  // Filled by with_depth().
  int ell = 0;
  double w = 0.0;
  Matrix s_pow;  // S^ell
  Matrix bound;  // w^ell S^ell
  Matrix osq;    // 1 / bound, kUnreachable where the bound is zero
};

SensitivityReport build_s(const FilterSpec& low, const FilterSpec& high, const Spectrum& d);
// Caches S^ell, the bound matrix and the over-squashing scores.
SensitivityReport with_depth(SensitivityReport report, double w, int ell);

// w^ell (S^ell)_{v,u}
double sensitivity_bound(const SensitivityReport& report, double w, int ell, Index v, Index u);
// 1 / bound_{v,u} from the cached depth, kUnreachable when the bound is zero.
double osq_score(const SensitivityReport& report, Index v, Index u);

// Linear message passing H <- S H W_l for each weight in turn.
Matrix spatial_forward(const Matrix& s, const Matrix& x, const std::vector<Matrix>& weights);
// d h_v / d x_u of spatial_forward as a (c_in x c_out) block: (S^ell)_{v,u} (W_0 ... W_{ell-1}).
Matrix jacobian_block(const Matrix& s, const std::vector<Matrix>& weights, Index v, Index u);
// Spectral norm of the Jacobian block for layers that share one filter pair.
double exact_jacobian_norm(const std::vector<LayerSpec>& layers, const Spectrum& d, Index v, Index u);

double spectral_norm(const Matrix& m);

struct TradeoffResult {
  bool pass = false;
  double energy1 = 0.0;
  double energy2 = 0.0;
};

// Raised when the first pair does not stay strictly inside the second pair's
// response (|r1_i| < r2_i) on every non-zero eigenvalue.
class DominanceError : public ValidationError {
 public:
  DominanceError(Index index, double r1, double r2);
  Index index() const { return index_; }

 private:
  Index index_;
};

// One-step Dirichlet energies of the two filter pairs from the same H and W.
TradeoffResult tradeoff_check(const FilterSpec& low1, const FilterSpec& high1, const FilterSpec& low2,
                              const FilterSpec& high2, const Spectrum& d, const Matrix& h,
                              const Matrix& w);

// S / A_hat on the support of the normalized adjacency, zero elsewhere.
Matrix reweighting_matrix(const SensitivityReport& report, const Graph& g);

}  // namespace mhkg
