#include "mhkg/oversquashing.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace mhkg {

namespace {

Matrix matrix_power(const Matrix& s, int ell) {
  Matrix p = Matrix::Identity(s.rows(), s.cols());
  for (int i = 0; i < ell; ++i) p = p * s;
  return p;
}

void check_pair(const SensitivityReport& r, Index v, Index u) {
  const Index n = r.s.rows();
  require(v >= 0 && v < n && u >= 0 && u < n, "node pair (" + std::to_string(v) + ", " +
                                                  std::to_string(u) + ") out of range");
}

std::string dominance_message(Index i, double r1, double r2) {
  std::ostringstream os;
  os.precision(17);
  os << "response dominance fails at eigen-index " << i << ": |r1| = " << std::abs(r1)
     << " is not below r2 = " << r2;
  return os.str();
}

}  // namespace

SensitivityReport build_s(const FilterSpec& low, const FilterSpec& high, const Spectrum& d) {
  SensitivityReport rep;
  const Matrix eye = Matrix::Identity(d.size(), d.size());
  rep.a_low = eye - spectral_operator(d, evaluate(low, d));
  rep.a_high = eye - spectral_operator(d, evaluate(high, d));
  rep.s = rep.a_low + rep.a_high;
  rep.negative_entries = rep.s.minCoeff() < -1e-12;
  return rep;
}

SensitivityReport with_depth(SensitivityReport report, double w, int ell) {
  require(ell >= 1, "depth ell must be at least 1");
  require(w >= 0.0 && std::isfinite(w), "weight budget w must be finite and non-negative");
  report.ell = ell;
  report.w = w;
  report.s_pow = matrix_power(report.s, ell);
  report.bound = std::pow(w, ell) * report.s_pow;
  report.osq = report.bound.unaryExpr([](double b) { return b == 0.0 ? kUnreachable : 1.0 / b; });
  return report;
}

double sensitivity_bound(const SensitivityReport& report, double w, int ell, Index v, Index u) {
  require(ell >= 1, "depth ell must be at least 1");
  require(w >= 0.0, "weight budget w must be non-negative");
  check_pair(report, v, u);
  const double sv = (report.ell == ell && report.s_pow.size() > 0) ? report.s_pow(v, u)
                                                                   : matrix_power(report.s, ell)(v, u);
  return std::pow(w, ell) * sv;
}

double osq_score(const SensitivityReport& report, Index v, Index u) {
  require(report.ell >= 1, "over-squashing scores need a report with a depth");
  check_pair(report, v, u);
  return report.osq(v, u);
}

Matrix spatial_forward(const Matrix& s, const Matrix& x, const std::vector<Matrix>& weights) {
  require(s.rows() == x.rows(), "S and features disagree on the node count");
  Matrix h = x;
  for (const auto& w : weights) {
    require(w.rows() == h.cols(), "weight shapes are not chained");
    h = s * h * w;
  }
  return h;
}

Matrix jacobian_block(const Matrix& s, const std::vector<Matrix>& weights, Index v, Index u) {
  require(!weights.empty(), "at least one layer is required");
  Matrix prod = weights.front();
  for (std::size_t l = 1; l < weights.size(); ++l) prod = prod * weights[l];
  return matrix_power(s, static_cast<int>(weights.size()))(v, u) * prod;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double exact_jacobian_norm(const std::vector<LayerSpec>& layers, const Spectrum& d, Index v, Index u) {
  require(!layers.empty(), "at least one layer is required");
  for (const auto& l : layers) {
    if (!(l.low == layers.front().low) || !(l.high == layers.front().high)) {
      throw ValidationError("layers use different filter pairs; the exact Jacobian needs one shared S");
    }
  }
  const auto rep = build_s(layers.front().low, layers.front().high, d);
  check_pair(rep, v, u);
  std::vector<Matrix> weights;
  for (const auto& l : layers) weights.push_back(l.weight);
  return spectral_norm(jacobian_block(rep.s, weights, v, u));
}

DominanceError::DominanceError(Index index, double r1, double r2)
    : ValidationError(dominance_message(index, r1, r2)), index_(index) {}

TradeoffResult tradeoff_check(const FilterSpec& low1, const FilterSpec& high1, const FilterSpec& low2,
                              const FilterSpec& high2, const Spectrum& d, const Matrix& h,
                              const Matrix& w) {
  const Vector r1 = combined_response(low1, high1, d);
  const Vector r2 = combined_response(low2, high2, d);
  for (Index i = 0; i < d.size(); ++i) {
    if (std::abs(d.eigenvalues(i)) <= 1e-9) continue;
    if (!(std::abs(r1(i)) < r2(i))) throw DominanceError(i, r1(i), r2(i));
  }
  const LayerSpec l1{low1, high1, w};
  const LayerSpec l2{low2, high2, w};
  const Matrix l = spectral_operator(d, d.eigenvalues);
  TradeoffResult out;
  out.energy1 = dirichlet_energy(propagate(l1, d, h), l);
  out.energy2 = dirichlet_energy(propagate(l2, d, h), l);
  out.pass = out.energy1 < out.energy2;
  return out;
}

Matrix reweighting_matrix(const SensitivityReport& report, const Graph& g) {
  const Matrix a = normalized_adjacency(g);
  require(a.rows() == report.s.rows(), "graph and report disagree on the node count");
  Matrix xi = Matrix::Zero(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0) xi(i, j) = report.s(i, j) / a(i, j);
  return xi;
}

}  // namespace mhkg
