#include "mhkg/filters.hpp"

#include <algorithm>
#include <cmath>

namespace mhkg {

std::string to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::Increasing: return "increasing";
    case Monotonicity::Decreasing: return "decreasing";
    case Monotonicity::Constant: return "constant";
    case Monotonicity::Neither: return "neither";
  }
  return "neither";
}

namespace {

// Range of p'(lambda) over [0, 2] for p = c0 + c1 l + c2 l^2 + c3 l^3.
std::pair<double, double> derivative_range(const std::vector<double>& c) {
  auto coef = [&](std::size_t i) { return i < c.size() ? c[i] : 0.0; };
  auto dp = [&](double l) { return coef(1) + 2 * coef(2) * l + 3 * coef(3) * l * l; };
  std::vector<double> vals{dp(0.0), dp(2.0)};
  if (coef(3) != 0.0) {
    const double vertex = -coef(2) / (3 * coef(3));
    if (vertex > 0.0 && vertex < 2.0) vals.push_back(dp(vertex));
  }
  return {*std::min_element(vals.begin(), vals.end()), *std::max_element(vals.begin(), vals.end())};
}

Monotonicity flip(Monotonicity m) {
  if (m == Monotonicity::Increasing) return Monotonicity::Decreasing;
  if (m == Monotonicity::Decreasing) return Monotonicity::Increasing;
  return m;
}

}  // namespace

FilterFamily FilterFamily::exp_of(std::vector<double> coefficients) {
  require(!coefficients.empty() && coefficients.size() <= 4,
          "exponent polynomial needs 1 to 4 coefficients (degree <= 3)");
  for (double c : coefficients) require(std::isfinite(c), "exponent polynomial coefficients must be finite");
  auto [lo, hi] = derivative_range(coefficients);
  require(lo >= 0.0 || hi <= 0.0,
          "exponent polynomial must be monotone on [0, 2] (its derivative changes sign)");
  FilterFamily f(FamilyKind::ExpOfUser);
  f.coefficients_ = std::move(coefficients);
  return f;
}

FilterFamily FilterFamily::constant(double c) {
  require(std::isfinite(c), "constant filter value must be finite");
  FilterFamily f(FamilyKind::Constant);
  f.value_ = c;
  return f;
}

FilterFamily FilterFamily::from_name(const std::string& name, std::vector<double> coefficients,
                                     double value) {
  if (name == "heat_low") return heat_low();
  if (name == "heat_high") return heat_high();
  if (name == "exp") return exp_of(std::move(coefficients));
  if (name == "identity_neg") return identity_neg();
  if (name == "identity_pos") return identity_pos();
  if (name == "sine_eighth") return sine_eighth();
  if (name == "cosine_eighth") return cosine_eighth();
  if (name == "zero") return zero();
  if (name == "constant") return constant(value);
  throw ValidationError("unknown filter family '" + name + "'");
}

FilterFamily FilterFamily::squared() const {
  FilterFamily f = *this;
  f.squared_ = true;
  return f;
}

std::string FilterFamily::name() const {
  switch (kind_) {
    case FamilyKind::HeatLow: return "heat_low";
    case FamilyKind::HeatHigh: return "heat_high";
    case FamilyKind::ExpOfUser: return "exp";
    case FamilyKind::IdentityNeg: return "identity_neg";
    case FamilyKind::IdentityPos: return "identity_pos";
    case FamilyKind::SineEighth: return "sine_eighth";
    case FamilyKind::CosineEighth: return "cosine_eighth";
    case FamilyKind::Zero: return "zero";
    case FamilyKind::Constant: return "constant";
  }
  return "zero";
}

double FilterFamily::base(double lambda) const {
  switch (kind_) {
    case FamilyKind::HeatLow: return std::exp(-lambda);
    case FamilyKind::HeatHigh: return std::exp(lambda);
    case FamilyKind::ExpOfUser: {
      double p = 0.0;
      for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) p = p * lambda + *it;
      return std::exp(p);
    }
    case FamilyKind::IdentityNeg: return -lambda;
    case FamilyKind::IdentityPos: return lambda;
    case FamilyKind::SineEighth: return std::sin(lambda / 8.0);
    case FamilyKind::CosineEighth: return std::cos(lambda / 8.0);
    case FamilyKind::Zero: return 0.0;
    case FamilyKind::Constant: return value_;
  }
  return 0.0;
}

double FilterFamily::operator()(double lambda) const {
  const double b = base(lambda);
  return squared_ ? b * b : b;
}

Vector FilterFamily::operator()(const Vector& lambdas) const {
  return lambdas.unaryExpr([this](double l) { return (*this)(l); });
}

Monotonicity FilterFamily::shape() const {
  Monotonicity m = Monotonicity::Constant;
  switch (kind_) {
    case FamilyKind::HeatLow:
    case FamilyKind::CosineEighth:
    case FamilyKind::IdentityNeg: m = Monotonicity::Decreasing; break;
    case FamilyKind::HeatHigh:
    case FamilyKind::SineEighth:
    case FamilyKind::IdentityPos: m = Monotonicity::Increasing; break;
    case FamilyKind::Zero:
    case FamilyKind::Constant: m = Monotonicity::Constant; break;
    case FamilyKind::ExpOfUser: {
      auto [lo, hi] = derivative_range(coefficients_);
      if (lo >= 0.0 && hi <= 0.0) m = Monotonicity::Constant;
      else m = lo >= 0.0 ? Monotonicity::Increasing : Monotonicity::Decreasing;
      break;
    }
  }
  // Squaring keeps the direction of a non-negative base and flips a non-positive one.
  if (squared_ && kind_ == FamilyKind::IdentityNeg) m = flip(m);
  return m;
}

FilterSpec FilterSpec::uniform(FilterFamily family, Index n, double theta, double gamma,
                               bool rescale) {
  return FilterSpec{std::move(family), Vector::Constant(n, theta), gamma, rescale};
}

bool FilterSpec::operator==(const FilterSpec& other) const {
  return family == other.family && theta.size() == other.theta.size() && theta == other.theta &&
         gamma == other.gamma && rescale == other.rescale;
}

FilterResponse evaluate(const FilterSpec& spec, const Spectrum& d) {
  require(spec.theta.size() == d.size(), "filter gains have length " +
                                             std::to_string(spec.theta.size()) + ", expected " +
                                             std::to_string(d.size()));
  require(std::isfinite(spec.gamma), "filter gamma must be finite");
  Vector r = spec.gamma * spec.theta.cwiseProduct(spec.family(d.eigenvalues));
  if (spec.rescale) r = rescale_0_2(r);
  if (!all_finite(r)) throw NumericError("filter response is not finite");
  return r;
}

FilterResponse combined_response(const FilterSpec& s1, const FilterSpec& s2, const Spectrum& d) {
  return evaluate(s1, d) + evaluate(s2, d);
}

namespace {

struct Cluster {
  double lo, hi;
};

// Response range of each eigenvalue cluster from `first` on.
std::vector<Cluster> clusters(const Vector& r, const Vector& lambda, Index first, double tol) {
  require(r.size() == lambda.size(), "response and eigenvalue lengths differ");
  std::vector<Cluster> out;
  double anchor = 0.0;
  for (Index i = first; i < r.size(); ++i) {
    if (out.empty() || lambda(i) - anchor > tol) {
      anchor = lambda(i);
      out.push_back({r(i), r(i)});
    } else {
      out.back().lo = std::min(out.back().lo, r(i));
      out.back().hi = std::max(out.back().hi, r(i));
    }
  }
  return out;
}

}  // namespace

Monotonicity monotonicity(const Vector& response, const Vector& eigenvalues, Index first,
                          double tol) {
  auto cs = clusters(response, eigenvalues, first, tol);
  bool up = false, down = false;
  for (std::size_t c = 0; c < cs.size(); ++c) {
    if (cs[c].hi - cs[c].lo > tol) return Monotonicity::Neither;
    if (c == 0) continue;
    const double step = cs[c].lo - cs[c - 1].lo;
    up = up || step > tol;
    down = down || step < -tol;
  }
  if (up && down) return Monotonicity::Neither;
  if (up) return Monotonicity::Increasing;
  if (down) return Monotonicity::Decreasing;
  return Monotonicity::Constant;
}

bool strictly_increasing(const Vector& response, const Vector& eigenvalues, Index first,
                         double tol) {
  auto cs = clusters(response, eigenvalues, first, tol);
  if (cs.size() < 2) return false;
  for (std::size_t c = 0; c < cs.size(); ++c) {
    if (cs[c].hi - cs[c].lo > tol) return false;
    if (c > 0 && !(cs[c].lo - cs[c - 1].lo > tol)) return false;
  }
  return true;
}

bool strictly_decreasing(const Vector& response, const Vector& eigenvalues, Index first,
                         double tol) {
  return strictly_increasing(-response, eigenvalues, first, tol);
}

}  // namespace mhkg
