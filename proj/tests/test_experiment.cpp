#include "helpers.hpp"

#include <doctest.h>

using namespace mhkg;
using namespace testing;

TEST_CASE("preset names round trip") {
  for (Preset p : all_presets()) CHECK(parse_preset(to_string(p)) == p);
  CHECK_THROWS_AS(parse_preset("HFD"), ValidationError);
}

TEST_CASE("preset responses have their advertised shapes") {
  CsbmParams params;
  params.p_intra = 0.006;
  params.p_inter = 0.054;
  params.seed = 5;
  auto ds = csbm_generate(params);
  auto d = laplacian_spectrum(ds.graph);
  const Index k = zero_multiplicity(d);
  const Index n = d.size();
  REQUIRE(k >= 1);

  auto resp = [&](Preset p) {
    auto pair = preset_pair(p, d, k);
    return Vector(combined_response(pair.low, pair.high, d));
  };

  const Vector lfd = resp(Preset::LFD);
  CHECK(monotonicity(lfd, d) == Monotonicity::Decreasing);
  CHECK(lfd.cwiseAbs().maxCoeff() == doctest::Approx(1.0));

  const Vector hfd = resp(Preset::HFDIncOSQ);
  Index arg = 0;
  CHECK(hfd.maxCoeff(&arg) == doctest::Approx(1.0));
  CHECK(d.eigenvalues(arg) == doctest::Approx(d.rho));
  CHECK(hfd(0) > 0.0);

  const Vector dinc = resp(Preset::DHFDIncOSQ);
  CHECK(dinc.head(k).isZero(0.0));
  CHECK(dinc.maxCoeff() == doctest::Approx(1.0));
  CHECK(monotonicity(dinc, d.eigenvalues, k) != Monotonicity::Decreasing);

  const Vector ddec = resp(Preset::DHFDDecOSQ);
  CHECK(ddec.head(k).cwiseAbs().maxCoeff() < 1e-12);
  for (Index i = k; i < n; ++i) {
    CHECK(ddec(i) == doctest::Approx(d.eigenvalues(i) / d.rho));
    CHECK(ddec(i) <= d.eigenvalues(i) + 1e-12);
  }
  CHECK_THROWS_AS(preset_pair(Preset::LFD, d, n), ValidationError);
}

TEST_CASE("zeta pair") {
  auto pair = zeta_pair(0.3, 4);
  CHECK(pair.low.theta == Vector::Ones(4));
  CHECK(pair.high.theta == Vector::Constant(4, 0.3));
  CHECK(pair.high.family == FilterFamily::sine_eighth());
}

TEST_CASE("mean, sample deviation and rank correlation") {
  auto m = mean_sd({1.0, 2.0, 3.0, 4.0});
  CHECK(m.mean == 2.5);
  CHECK(m.sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(mean_sd({7.0}).sd == 0.0);

  CHECK(spearman({1, 2, 3, 4}, {10, 20, 35, 100}) == doctest::Approx(1.0));
  CHECK(spearman({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
  // Ties take average ranks: ranks (1.5, 1.5, 3) against (1, 2, 3).
  CHECK(spearman({1, 1, 2}, {1, 2, 3}) == doctest::Approx(0.8660254037844386));
  CHECK(spearman({1, 1, 1}, {1, 2, 3}) == 0.0);
  CHECK_THROWS_AS(spearman({1}, {1}), ValidationError);
}

TEST_CASE("run_classification builds the requested architecture") {
  CsbmParams params;
  params.n_nodes = 40;
  params.seed = 9;
  auto ds = csbm_generate(params);
  auto d = laplacian_spectrum(ds.graph);
  auto split = make_split(40, {0.6, 0.2, 0.2}, 1);
  ClassificationSetup setup;
  setup.depth = 3;
  setup.hidden = 5;
  setup.train.max_epochs = 3;
  auto res = run_classification(ds, d, split, zeta_pair(1.0, 40), setup, 2);
  REQUIRE(res.network.layers.size() == 3);
  CHECK(res.network.layers[0].weight.rows() == 16);
  CHECK(res.network.layers[1].weight.rows() == 5);
  CHECK(res.network.layers[2].weight.cols() == 2);
  CHECK(res.trace.size() == 3);
  auto again = run_classification(ds, d, split, zeta_pair(1.0, 40), setup, 2);
  CHECK(again.trace.back().train_loss == res.trace.back().train_loss);
}
