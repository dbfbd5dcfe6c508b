#pragma once

#include "mhkg/spectral.hpp"
#include "mhkg/types.hpp"

#include <string>
#include <vector>

namespace mhkg {

enum class FamilyKind {
  HeatLow,       // e^{-lambda}
  HeatHigh,      // e^{lambda}
  ExpOfUser,     // e^{p(lambda)}, p a polynomial of degree <= 3 monotone on [0, 2]
  IdentityNeg,   // -lambda
  IdentityPos,   // lambda
  SineEighth,    // sin(lambda / 8)
  CosineEighth,  // cos(lambda / 8)
  Zero,
  Constant,      // c
};

enum class Monotonicity { Increasing, Decreasing, Constant, Neither };

std::string to_string(Monotonicity m);

// Scalar function of a Laplacian eigenvalue. A family may be squared
// (value^2), which is how the sine/cosine reconstruction pair is expressed.
class FilterFamily {
 public:
  static FilterFamily heat_low() { return FilterFamily(FamilyKind::HeatLow); }
  static FilterFamily heat_high() { return FilterFamily(FamilyKind::HeatHigh); }
  static FilterFamily exp_of(std::vector<double> coefficients);
  static FilterFamily identity_neg() { return FilterFamily(FamilyKind::IdentityNeg); }
  static FilterFamily identity_pos() { return FilterFamily(FamilyKind::IdentityPos); }
  static FilterFamily sine_eighth() { return FilterFamily(FamilyKind::SineEighth); }
  static FilterFamily cosine_eighth() { return FilterFamily(FamilyKind::CosineEighth); }
  static FilterFamily zero() { return FilterFamily(FamilyKind::Zero); }
  static FilterFamily constant(double c);
  // Looks up a family by its name(); `coefficients` and `value` feed ExpOfUser and Constant.
  static FilterFamily from_name(const std::string& name, std::vector<double> coefficients = {},
                                double value = 0.0);

  FilterFamily squared() const;

  FamilyKind kind() const { return kind_; }
  double value() const { return value_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  bool is_squared() const { return squared_; }
  std::string name() const;

  double operator()(double lambda) const;
  Vector operator()(const Vector& lambdas) const;

  // Shape on [0, 2].
  Monotonicity shape() const;

  bool operator==(const FilterFamily& other) const = default;

 private:
  explicit FilterFamily(FamilyKind kind) : kind_(kind) {}
  double base(double lambda) const;

  FamilyKind kind_;
  double value_ = 0.0;
  std::vector<double> coefficients_;
  bool squared_ = false;
};

// Per-eigenvalue gains theta applied to a family, scaled by gamma and
// optionally rescaled affinely onto [0, 2].
struct FilterSpec {
  FilterFamily family = FilterFamily::zero();
  Vector theta;
  double gamma = 1.0;
  bool rescale = false;

  static FilterSpec uniform(FilterFamily family, Index n, double theta = 1.0, double gamma = 1.0,
                            bool rescale = false);
  bool operator==(const FilterSpec& other) const;
};

using FilterResponse = Vector;

// gamma * theta_i * family(lambda_i), then rescaled if requested.
FilterResponse evaluate(const FilterSpec& spec, const Spectrum& d);
FilterResponse combined_response(const FilterSpec& s1, const FilterSpec& s2, const Spectrum& d);

// Affine map min -> 0, max -> 2; a constant vector maps to all ones.
template <typename Derived>
Vector rescale_0_2(const Eigen::MatrixBase<Derived>& r) {
  Vector out = r;
  if (out.size() == 0) return out;
  const double lo = out.minCoeff();
  const double hi = out.maxCoeff();
  if (!(hi > lo)) return Vector::Ones(out.size());
  out = 2.0 * (out.array() - lo) / (hi - lo);
  return out;
}

// Classifies the response over eigenvalue clusters (eigenvalues within tol
// share a cluster) from index `first` on. Responses that differ by at most tol
// count as ties; a cluster whose responses disagree by more than tol is Neither.
Monotonicity monotonicity(const Vector& response, const Vector& eigenvalues, Index first = 0,
                          double tol = 1e-10);
inline Monotonicity monotonicity(const FilterResponse& response, const Spectrum& d) {
  return monotonicity(response, d.eigenvalues);
}

// True when every consecutive cluster step from `first` on rises by more than tol.
bool strictly_increasing(const Vector& response, const Vector& eigenvalues, Index first = 0,
                         double tol = 1e-10);
bool strictly_decreasing(const Vector& response, const Vector& eigenvalues, Index first = 0,
                         double tol = 1e-10);

}  // namespace mhkg
