#include "helpers.hpp"

#include <doctest.h>

using namespace mhkg;
using namespace testing;

namespace {

LayerSpec layer_of(FilterFamily lo, double tlo, FilterFamily hi, double thi, Index n, Matrix w) {
  return LayerSpec{FilterSpec::uniform(std::move(lo), n, tlo), FilterSpec::uniform(std::move(hi), n, thi),
                   std::move(w)};
}

}  // namespace

TEST_CASE("Dirichlet energy") {
  std::mt19937_64 rng(21);
  Graph g = random_graph(6, 0.5, rng, true);
  Matrix l = normalized_laplacian(g);
  auto d = eig_sym(l);
  Vector s(6);
  for (int i = 0; i < 6; ++i) s(i) = std::sqrt(g.degrees()[i] + 1.0);
  CHECK(dirichlet_energy(Matrix(s), l) < 1e-12);
  for (Index i = 0; i < 6; ++i) {
    CHECK(std::abs(dirichlet_energy(Matrix(d.eigenvectors.col(i)), l) - d.eigenvalues(i)) < 1e-12);
  }
  for (int t = 0; t < 20; ++t) {
    Matrix h = random_matrix(6, 3, rng);
    const double oracle = (d.eigenvalues.asDiagonal() *
                           (d.eigenvectors.transpose() * h).cwiseAbs2()).sum();
    CHECK(std::abs(dirichlet_energy(h, l) - oracle) < 1e-9);
    CHECK(std::abs(spectral_energy(d, graph_fourier(d, h)) - oracle) < 1e-9);
  }
  CHECK_THROWS_AS(dirichlet_energy(Matrix::Zero(5, 2), l), ValidationError);
}

TEST_CASE("propagate") {
  std::mt19937_64 rng(22);
  auto d = laplacian_spectrum(random_graph(8, 0.4, rng, true));
  Matrix h = random_matrix(8, 3, rng);
  auto zero = layer_of(FilterFamily::zero(), 1, FilterFamily::zero(), 1, 8, Matrix::Identity(3, 3));
  CHECK(propagate(zero, d, h).isZero(0.0));

  LayerSpec recon{FilterSpec::uniform(FilterFamily::sine_eighth().squared(), 8),
                  FilterSpec::uniform(FilterFamily::cosine_eighth().squared(), 8), Matrix::Identity(3, 3)};
  CHECK(max_abs(propagate(recon, d, h) - h) < 1e-8);

  auto lh = layer_of(FilterFamily::heat_low(), 0.3, FilterFamily::heat_high(), 0.8, 8, random_matrix(3, 2, rng));
  Matrix two = spectral_filter(d, evaluate(lh.low, d), h) * lh.weight +
               spectral_filter(d, evaluate(lh.high, d), h) * lh.weight;
  CHECK(max_abs(propagate(lh, d, h) - two) < 1e-10);
  Matrix h2 = random_matrix(8, 3, rng);
  CHECK(max_abs(propagate(lh, d, Matrix(2.0 * h - h2)) -
                (2.0 * propagate(lh, d, h) - propagate(lh, d, h2))) < 1e-12);
  CHECK_THROWS_AS(propagate(lh, d, Matrix::Zero(8, 2)), ValidationError);
}

TEST_CASE("propagate on a single edge matches a hand computation") {
  auto d = laplacian_spectrum(Graph(2, {{0, 1}}));
  auto layer = layer_of(FilterFamily::heat_low(), 1, FilterFamily::heat_high(), 1, 2, Matrix::Identity(2, 2));
  const double s = 1.0 / std::sqrt(2.0);
  Matrix u(2, 2);
  u << s, s, s, -s;
  Vector r(2);
  r << 2.0, std::exp(-1.0) + std::exp(1.0);
  CHECK(max_abs(propagate(layer, d, Matrix::Identity(2, 2)) - u * r.asDiagonal() * u.transpose()) < 1e-14);
}

TEST_CASE("simulate classifies low- and high-frequency dynamics") {
  std::mt19937_64 rng(23);
  Graph g = random_graph(10, 0.3, rng, true);
  auto d = laplacian_spectrum(g);
  Matrix h0 = random_matrix(10, 3, rng);
  const Matrix eye = Matrix::Identity(3, 3);

  // Low gain twice the high gain with a sine high branch: strictly decreasing response.
  auto lfd = layer_of(FilterFamily::heat_low(), 2.0, FilterFamily::sine_eighth(), 1.0, 10, eye);
  auto rep = simulate(lfd, d, h0, 400);
  CHECK(rep.verdict == Verdict::LFD);
  CHECK(rep.rayleigh(400) < 1e-3);

  auto hfd = layer_of(FilterFamily::heat_low(), 1.0, FilterFamily::heat_high(), 3.0, 10, eye);
  const int m = steps_to_converge(combined_response(hfd.low, hfd.high, d), d);
  rep = simulate(hfd, d, h0, m);
  CHECK(rep.verdict == Verdict::HFD);
  CHECK(std::abs(rep.rayleigh(m) - d.rho) < 1e-3);
  CHECK(rep.top_residual < 1e-3);
  REQUIRE(rep.dominant_frequency.has_value());
  CHECK(std::abs(*rep.dominant_frequency - d.rho) < 1e-12);
  CHECK(std::abs(rep.final_state.norm() - 1.0) < 1e-12);

  for (Index t = 0; t <= m; ++t) {
    CHECK(rep.rayleigh(t) >= 0.0);
    CHECK(rep.rayleigh(t) <= d.rho + 1e-9);
    CHECK(rep.energy(t) >= 0.0);
  }
  CHECK(rep.energy(0) == doctest::Approx(dirichlet_energy(h0, normalized_laplacian(g))));
}

TEST_CASE("simulate edge cases") {
  std::mt19937_64 rng(24);
  auto d = laplacian_spectrum(random_graph(6, 0.5, rng, true));
  Matrix h0 = random_matrix(6, 2, rng);
  auto zero = layer_of(FilterFamily::zero(), 1, FilterFamily::zero(), 1, 6, Matrix::Identity(2, 2));
  auto rep = simulate(zero, d, h0, 5);
  for (int t = 1; t <= 5; ++t) CHECK(rep.energy(t) == 0.0);
  CHECK(rep.verdict == Verdict::LFD);
  CHECK_FALSE(rep.dominant_frequency.has_value());
  CHECK_THROWS_AS(simulate(zero, d, h0, 0), ValidationError);
  CHECK_THROWS_AS(simulate(zero, d, Matrix::Zero(6, 2), 3), ValidationError);

  // A huge gain would overflow without renormalization.
  auto big = layer_of(FilterFamily::heat_high(), 1e100, FilterFamily::zero(), 0, 6, Matrix::Identity(2, 2));
  CHECK_NOTHROW(simulate(big, d, h0, 50));
}

TEST_CASE("closed-form trajectory matches iterated propagation") {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 10; ++trial) {
    auto d = laplacian_spectrum(random_graph(5, 0.5, rng, true));
    Matrix w = random_symmetric(3, rng) * 0.5;
    auto layer = layer_of(FilterFamily::heat_low(), 0.6, FilterFamily::heat_high(), 0.4, 5, w);
    Matrix h0 = random_matrix(5, 3, rng);
    Matrix h = h0;
    for (int m = 1; m <= 6; ++m) {
      h = propagate(layer, d, h);
      Matrix cf = closed_form_trajectory(layer, d, h0, m);
      CHECK(max_abs(cf - h) <= 1e-6 * std::max(1.0, max_abs(h)));
    }
  }
  auto d = laplacian_spectrum(path_graph(4));
  LayerSpec ident{FilterSpec::uniform(FilterFamily::constant(1.0), 4),
                  FilterSpec::uniform(FilterFamily::zero(), 4), Matrix::Identity(2, 2)};
  Matrix h0 = random_matrix(4, 2, rng);
  CHECK(max_abs(closed_form_trajectory(ident, d, h0, 7) - h0) < 1e-12);
  ident.weight(0, 1) = 0.5;
  CHECK_THROWS_AS(closed_form_trajectory(ident, d, h0, 2), ValidationError);
}

TEST_CASE("make_hfd_zeta") {
  Spectrum d;
  d.eigenvalues = Vector(2);
  d.eigenvalues << 0.0, 1.0;
  d.eigenvectors = Matrix::Identity(2, 2);
  d.rho = 1.0;
  auto lo = FilterSpec::uniform(FilterFamily::heat_low(), 2);
  auto hi = FilterSpec::uniform(FilterFamily::heat_high(), 2);
  const double z = make_hfd_zeta(lo, hi, d);
  const double bound = (1.0 - std::exp(-1.0)) / (std::exp(1.0) - 1.0);
  CHECK(z >= bound);
  // The grid value just below the returned one must fail.
  const Vector grid = zeta_grid();
  Index j = 0;
  while (grid(j) < z) ++j;
  REQUIRE(j > 0);
  CHECK(grid(j - 1) < bound + 1e-6);

  auto zero = FilterSpec::uniform(FilterFamily::zero(), 2);
  CHECK(make_hfd_zeta(zero, hi, d) == grid(0));
  auto cosine = FilterSpec::uniform(FilterFamily::cosine_eighth(), 2);
  CHECK_THROWS_AS(make_hfd_zeta(lo, cosine, d), ValidationError);
}

TEST_CASE("make_hfd_zeta and make_lfd_zeta drive the simulated verdicts") {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 10; ++trial) {
    auto d = laplacian_spectrum(random_graph(12, 0.25, rng, true));
    auto lo = FilterSpec::uniform(FilterFamily::heat_low(), 12);
    auto hi = FilterSpec::uniform(FilterFamily::heat_high(), 12);
    const double zh = make_hfd_zeta(lo, hi, d);
    const double zl = make_lfd_zeta(lo, hi, d);
    CHECK(zl < zh);
    Matrix h0 = random_matrix(12, 2, rng);
    auto hi_h = hi;
    hi_h.theta *= zh;
    LayerSpec layer{lo, hi_h, Matrix::Identity(2, 2)};
    const int m = steps_to_converge(combined_response(lo, hi_h, d), d);
    CHECK(simulate(layer, d, h0, m).verdict == Verdict::HFD);
    auto hi_l = hi;
    hi_l.theta *= zl;
    layer.high = hi_l;
    const int ml = steps_to_converge(combined_response(lo, hi_l, d), d);
    CHECK(simulate(layer, d, h0, ml).verdict == Verdict::LFD);
  }
}

TEST_CASE("delayed HFD construction") {
  auto d = laplacian_spectrum(path_graph(7));
  auto t = delayed_hfd_construct(d, 1, 0.5);
  CHECK(t.theta_low.isZero(0.0));
  CHECK(t.theta_high(0) == 0.0);
  LayerSpec layer{FilterSpec{FilterFamily::heat_low(), t.theta_low, 1.0, false},
                  FilterSpec{FilterFamily::heat_high(), t.theta_high, 1.0, false}, Matrix::Identity(2, 2)};
  Vector r = combined_response(layer.low, layer.high, d);
  CHECK(r(0) == 0.0);
  for (Index i = 1; i < 7; ++i) {
    CHECK(r(i) > 0.0);
    CHECK(r(i) <= 0.5 * d.eigenvalues(i) + 1e-15);
  }
  CHECK(monotonicity(r, d.eigenvalues, 1) == Monotonicity::Increasing);
  std::mt19937_64 rng(27);
  CHECK(simulate(layer, d, random_matrix(7, 2, rng), steps_to_converge(r, d)).verdict == Verdict::HFD);

  auto d2 = laplacian_spectrum(Graph(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}}));
  auto t2 = delayed_hfd_construct(d2, 2, 0.1);
  CHECK(t2.theta_high.head(2).isZero(0.0));
  CHECK(t2.theta_low.isZero(0.0));
  CHECK_THROWS_AS(delayed_hfd_construct(d, 1, 1.0), ValidationError);
  CHECK_THROWS_AS(delayed_hfd_construct(d, 0, 0.5), ValidationError);  // lambda_0 = 0 is not positive
}

TEST_CASE("response_case") {
  auto d = laplacian_spectrum(path_graph(6));
  const Index n = 6;
  auto t = delayed_hfd_construct(d, 1, 0.2);
  FilterSpec lo{FilterFamily::heat_low(), t.theta_low, 1.0, false};
  FilterSpec hi{FilterFamily::heat_high(), t.theta_high, 1.0, false};
  CHECK(response_case(lo, hi, d) == ResponseCase::IncreasingSomewhere);

  auto c1 = FilterSpec::uniform(FilterFamily::constant(0.5), n);
  auto c2 = FilterSpec::uniform(FilterFamily::constant(0.25), n);
  c1.theta(0) = c2.theta(0) = 0.0;
  CHECK(response_case(c1, c2, d) == ResponseCase::ConstantSomewhere);

  // 5 e^{-lambda} off the kernel: decreasing and above lambda everywhere on a path.
  FilterSpec flat{FilterFamily::cosine_eighth(), Vector::Zero(n), 1.0, false};
  FilterSpec steep{FilterFamily::heat_low(), Vector::Constant(n, 5.0), 1.0, false};
  steep.theta(0) = 0.0;
  const Vector rs = combined_response(steep, flat, d);
  REQUIRE((rs.tail(n - 1).array() > d.eigenvalues.tail(n - 1).array()).all());
  CHECK(response_case(steep, flat, d) == ResponseCase::DecreasingAboveLambda);

  // Decreasing but below lambda off the kernel: the rise out of the kernel is the increasing part.
  FilterSpec small{FilterFamily::heat_low(), Vector::Constant(n, 0.01), 1.0, false};
  small.theta(0) = 0.0;
  REQUIRE((combined_response(small, flat, d).array() <= d.eigenvalues.array() + 1e-12).all());
  CHECK(response_case(small, flat, d) == ResponseCase::IncreasingSomewhere);

  FilterSpec neg = steep;
  neg.theta(2) = -1.0;
  CHECK_THROWS_AS(response_case(neg, flat, d), ValidationError);
  FilterSpec unzeroed = FilterSpec::uniform(FilterFamily::heat_low(), n);
  CHECK_THROWS_AS(response_case(unzeroed, flat, d), ValidationError);
}
