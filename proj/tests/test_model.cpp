#include "helpers.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <algorithm>

#include <numeric>
#include <sstream>

using namespace mhkg;
using namespace testing;

namespace {

struct Fixture {
  Graph g;
  Spectrum d;
  Matrix x;
  std::vector<int> labels;
  std::vector<Index> all;
};

Fixture make_fixture(int n, int f, int classes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Fixture fx{random_graph(n, 0.3, rng, true), {}, {}, {}, {}};
  fx.d = laplacian_spectrum(fx.g);
  fx.x = random_matrix(n, f, rng);
  for (int i = 0; i < n; ++i) fx.labels.push_back(i % classes);
  fx.all.resize(n);
  std::iota(fx.all.begin(), fx.all.end(), 0);
  return fx;
}

NetworkConfig config(std::vector<int> dims, FilterSpec low, FilterSpec high, Activation act) {
  NetworkConfig c;
  c.dims = std::move(dims);
  c.low = std::move(low);
  c.high = std::move(high);
  c.activation = act;
  return c;
}

double loss_of(const Network& net, const Fixture& fx, const std::vector<Index>& mask, double wd) {
  return loss_and_grads(net, fx.d, fx.x, fx.labels, mask, wd).loss;
}

// Central differences over every trainable scalar.
void check_gradients(Network net, const Fixture& fx, const std::vector<Index>& mask, double wd) {
  const double h = 1e-5;
  auto lg = loss_and_grads(net, fx.d, fx.x, fx.labels, mask, wd);
  auto probe = [&](double& slot, double analytic) {
    const double keep = slot;
    slot = keep + h;
    const double up = loss_of(net, fx, mask, wd);
    slot = keep - h;
    const double down = loss_of(net, fx, mask, wd);
    slot = keep;
    const double fd = (up - down) / (2 * h);
    CHECK(std::abs(fd - analytic) <= 1e-4 * std::max(1.0, std::abs(fd)));
  };
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    auto& layer = net.layers[l];
    for (Index i = 0; i < layer.weight.size(); ++i) probe(layer.weight.data()[i], lg.grads.weight[l].data()[i]);
    for (Index i = 0; i < layer.low.theta.size(); ++i) probe(layer.low.theta(i), lg.grads.theta_low[l](i));
    for (Index i = 0; i < layer.high.theta.size(); ++i) probe(layer.high.theta(i), lg.grads.theta_high[l](i));
  }
}

void randomize_thetas(Network& net, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.5);
  for (auto& layer : net.layers) {
    for (Index i = 0; i < layer.low.theta.size(); ++i) layer.low.theta(i) = u(rng);
    for (Index i = 0; i < layer.high.theta.size(); ++i) layer.high.theta(i) = u(rng);
  }
}

}  // namespace

TEST_CASE("identity response with an identity weight returns the input") {
  auto fx = make_fixture(8, 3, 3, 40);
  auto one = FilterSpec::uniform(FilterFamily::constant(1.0), 8);
  auto zero = FilterSpec::uniform(FilterFamily::zero(), 8);
  for (Activation act : {Activation::None, Activation::ReLU}) {
    Network net = init_network(config({3, 3}, one, zero, act), 1);
    net.layers[0].weight = Matrix::Identity(3, 3);
    CHECK(max_abs(forward(net, fx.d, fx.x) - fx.x) < 1e-12);
  }
}

TEST_CASE("all-zero filters give uniform predictions and loss ln C") {
  auto fx = make_fixture(9, 4, 3, 41);
  auto zero = FilterSpec::uniform(FilterFamily::zero(), 9);
  Network net = init_network(config({4, 5, 3}, zero, zero, Activation::ReLU), 2);
  auto lg = loss_and_grads(net, fx.d, fx.x, fx.labels, fx.all, 0.0);
  CHECK(lg.logits.isZero(0.0));
  CHECK(lg.loss == doctest::Approx(std::log(3.0)));
}

TEST_CASE("two-layer forward matches an explicit vertex-domain computation") {
  auto fx = make_fixture(7, 3, 2, 42);
  auto lo = FilterSpec::uniform(FilterFamily::heat_low(), 7, 0.8);
  auto hi = FilterSpec::uniform(FilterFamily::sine_eighth(), 7, 1.7);
  Network net = init_network(config({3, 4, 2}, lo, hi, Activation::ReLU), 3);
  // Oracle: the filter as a dense matrix built from Eigen's own eigensolver.
  Eigen::SelfAdjointEigenSolver<Matrix> es(normalized_laplacian(fx.g));
  const Vector lam = es.eigenvalues();
  const Vector r = 0.8 * (-lam.array()).exp() + 1.7 * (lam.array() / 8.0).sin();
  const Matrix f = es.eigenvectors() * r.asDiagonal() * es.eigenvectors().transpose();
  const Matrix h1 = (f * fx.x * net.layers[0].weight).cwiseMax(0.0);
  const Matrix expect = f * h1 * net.layers[1].weight;
  CHECK(max_abs(forward(net, fx.d, fx.x) - expect) < 1e-10);
}

TEST_CASE("cross-entropy limits") {
  auto fx = make_fixture(6, 2, 2, 43);
  auto one = FilterSpec::uniform(FilterFamily::constant(1.0), 6);
  auto zero = FilterSpec::uniform(FilterFamily::zero(), 6);
  Network net = init_network(config({2, 2}, one, zero, Activation::None), 4);
  Matrix x = Matrix::Zero(6, 2);
  for (int i = 0; i < 6; ++i) x(i, fx.labels[i]) = 1.0;
  net.layers[0].weight = 100.0 * Matrix::Identity(2, 2);
  CHECK(loss_and_grads(net, fx.d, x, fx.labels, fx.all, 0.0).loss < 1e-12);
  net.layers[0].weight *= 0.0;
  CHECK(loss_and_grads(net, fx.d, x, fx.labels, fx.all, 0.0).loss == doctest::Approx(std::log(2.0)));
  net.layers[0].weight = Matrix::Ones(2, 2);
  CHECK(loss_and_grads(net, fx.d, x, fx.labels, fx.all, 0.25).loss == doctest::Approx(std::log(2.0) + 1.0));
}

TEST_CASE("gradients match finite differences") {
  auto fx = make_fixture(7, 3, 3, 44);
  std::mt19937_64 rng(45);
  const std::vector<Index> mask{0, 2, 3, 5, 6};
  const FilterFamily fams[][2] = {{FilterFamily::heat_low(), FilterFamily::heat_high()},
                                  {FilterFamily::heat_low(), FilterFamily::sine_eighth()},
                                  {FilterFamily::cosine_eighth(), FilterFamily::identity_pos()}};
  for (const auto& pair : fams) {
    for (Activation act : {Activation::None, Activation::ReLU}) {
      for (bool rescale : {false, true}) {
        CAPTURE(pair[0].name());
        CAPTURE(to_string(act));
        CAPTURE(rescale);
        auto lo = FilterSpec::uniform(pair[0], 7, 1.0, 1.1, rescale);
        auto hi = FilterSpec::uniform(pair[1], 7, 1.0, 0.9, rescale);
        Network net = init_network(config({3, 4, 3}, lo, hi, act), 5);
        randomize_thetas(net, rng);
        check_gradients(net, fx, mask, 0.01);
      }
    }
  }
}

TEST_CASE("two-branch heat mode equals the summed response") {
  auto fx = make_fixture(8, 3, 2, 46);
  std::mt19937_64 rng(47);
  const std::pair<FilterFamily, FilterFamily> pairs[] = {
      {FilterFamily::heat_low(), FilterFamily::heat_high()},
      {FilterFamily::exp_of({0.0, -0.5, 0.1}), FilterFamily::exp_of({-0.0, 0.5, -0.1})}};
  for (const auto& [lf, hf] : pairs) {
    for (Activation act : {Activation::None, Activation::ReLU}) {
      auto c = config({3, 5, 2}, FilterSpec::uniform(lf, 8), FilterSpec::uniform(hf, 8), act);
      Network g = init_network(c, 6);
      randomize_thetas(g, rng);
      Network m = g;
      m.mode = Mode::MHKG;
      auto a = loss_and_grads(g, fx.d, fx.x, fx.labels, fx.all, 0.0);
      auto b = loss_and_grads(m, fx.d, fx.x, fx.labels, fx.all, 0.0);
      CHECK(max_abs(a.logits - b.logits) < 1e-12);
      CHECK(std::abs(a.loss - b.loss) < 1e-12);
      for (std::size_t l = 0; l < g.layers.size(); ++l) {
        CHECK(max_abs(a.grads.weight[l] - b.grads.weight[l]) < 1e-12);
        CHECK(max_abs(a.grads.theta_high[l] - b.grads.theta_high[l]) < 1e-12);
      }
    }
  }
  Network bad = init_network(config({3, 2}, FilterSpec::uniform(FilterFamily::heat_low(), 8),
                                    FilterSpec::uniform(FilterFamily::sine_eighth(), 8), Activation::None),
                             7);
  bad.mode = Mode::MHKG;
  CHECK_THROWS_AS(forward(bad, fx.d, fx.x), ValidationError);
}

TEST_CASE("low branch plus constant source splits into filter and residual terms") {
  auto fx = make_fixture(8, 3, 2, 48);
  auto lo = FilterSpec::uniform(FilterFamily::heat_low(), 8, 0.6);
  auto src = FilterSpec::uniform(FilterFamily::constant(1.0), 8, 0.4);
  Network net = init_network(config({3, 3}, lo, src, Activation::None), 8);
  const Matrix& w = net.layers[0].weight;
  Matrix expect = spectral_filter(fx.d, evaluate(lo, fx.d), Matrix(fx.x * w)) + 0.4 * fx.x * w;
  CHECK(max_abs(forward(net, fx.d, fx.x) - expect) < 1e-12);
}

TEST_CASE("forward is permutation equivariant") {
  auto fx = make_fixture(9, 3, 2, 49);
  std::vector<int> perm(9);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(50);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Graph::Edge> edges;
  for (auto [i, j] : fx.g.edges()) edges.emplace_back(perm[i], perm[j]);
  Graph pg(9, edges);
  auto pd = laplacian_spectrum(pg);
  Matrix px(9, 3);
  for (int i = 0; i < 9; ++i) px.row(perm[i]) = fx.x.row(i);

  auto lo = FilterSpec::uniform(FilterFamily::heat_low(), 9, 0.5);
  auto hi = FilterSpec::uniform(FilterFamily::sine_eighth(), 9, 2.0);
  Network net = init_network(config({3, 4, 2}, lo, hi, Activation::ReLU), 9);
  const Matrix y = forward(net, fx.d, fx.x);
  const Matrix py = forward(net, pd, px);
  for (int i = 0; i < 9; ++i) CHECK((py.row(perm[i]) - y.row(i)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("frozen parameters keep the loss constant") {
  auto fx = make_fixture(12, 3, 2, 51);
  auto c = config({3, 4, 2}, FilterSpec::uniform(FilterFamily::heat_low(), 12),
                  FilterSpec::uniform(FilterFamily::heat_high(), 12), Activation::ReLU);
  c.train_theta = false;
  c.train_weight = false;
  Network net = init_network(c, 10);
  Split split = make_split(12, {0.5, 0.25, 0.25}, 3);
  TrainConfig tc;
  tc.max_epochs = 5;
  tc.learning_rate = 0.1;
  auto res = train(net, fx.d, fx.x, fx.labels, split, tc);
  REQUIRE(res.trace.size() == 5);
  for (const auto& m : res.trace) CHECK(m.train_loss == res.trace.front().train_loss);
  CHECK(res.best_epoch == 0);
}

TEST_CASE("training separates a clean two-block graph") {
  CsbmParams p;
  p.n_nodes = 60;
  p.p_intra = 0.3;
  p.p_inter = 0.0;
  p.signal = 3.0;
  p.noise_sd = 0.3;
  p.feature_dim = 4;
  p.seed = 11;
  auto ds = csbm_generate(p);
  auto d = laplacian_spectrum(ds.graph);
  Split split = make_split(60, {0.6, 0.2, 0.2}, 12);
  auto c = config({4, 8, 2}, FilterSpec::uniform(FilterFamily::heat_low(), 60),
                  FilterSpec::uniform(FilterFamily::zero(), 60), Activation::ReLU);
  c.train_theta = false;
  TrainConfig tc;
  tc.max_epochs = 200;
  tc.learning_rate = 0.1;
  auto res = train(init_network(c, 13), d, ds.features, ds.labels, split, tc);
  CHECK(res.trace.back().train_accuracy == 1.0);
  CHECK(res.best_val_accuracy == 1.0);
  CHECK(res.trace.back().train_loss < res.trace.front().train_loss);
}

TEST_CASE("early stopping and divergence") {
  auto fx = make_fixture(12, 3, 2, 52);
  auto c = config({3, 2}, FilterSpec::uniform(FilterFamily::heat_low(), 12),
                  FilterSpec::uniform(FilterFamily::heat_high(), 12), Activation::None);
  Split split = make_split(12, {0.5, 0.25, 0.25}, 4);
  TrainConfig tc;
  tc.max_epochs = 100;
  tc.patience = 3;
  auto res = train(init_network(c, 14), fx.d, fx.x, fx.labels, split, tc);
  CHECK(res.trace.size() <= 100);
  CHECK(static_cast<int>(res.trace.size()) - 1 - res.best_epoch <= 3);

  tc.patience = 0;
  tc.learning_rate = 1e300;
  CHECK_THROWS_AS(train(init_network(c, 14), fx.d, fx.x, fx.labels, split, tc), TrainingDiverged);
}

TEST_CASE("tied gains stay identical across layers") {
  auto fx = make_fixture(10, 3, 2, 53);
  auto c = config({3, 4, 4, 2}, FilterSpec::uniform(FilterFamily::heat_low(), 10),
                  FilterSpec::uniform(FilterFamily::sine_eighth(), 10), Activation::ReLU);
  c.tie_theta = true;
  Split split = make_split(10, {0.6, 0.2, 0.2}, 5);
  TrainConfig tc;
  tc.max_epochs = 10;
  tc.learning_rate = 0.05;
  tc.patience = 0;
  Network net = init_network(c, 15);
  auto lg = loss_and_grads(net, fx.d, fx.x, fx.labels, split.train, 0.0);
  REQUIRE(max_abs(lg.grads.theta_low[0] - lg.grads.theta_low[1]) > 0.0);
  auto res = train(net, fx.d, fx.x, fx.labels, split, tc);
  for (const auto& layer : res.network.layers) {
    CHECK(layer.low.theta == res.network.layers.front().low.theta);
    CHECK(layer.high.theta == res.network.layers.front().high.theta);
  }
}

TEST_CASE("checkpoint round trip is exact") {
  auto fx = make_fixture(8, 3, 2, 54);
  auto c = config({3, 5, 2}, FilterSpec::uniform(FilterFamily::exp_of({0.1, -1.0}), 8, 1.0, 1.2, true),
                  FilterSpec::uniform(FilterFamily::sine_eighth().squared(), 8, 0.3), Activation::ReLU);
  c.tie_theta = true;
  c.mode = Mode::GMHKG;
  Network net = init_network(c, 16);
  std::mt19937_64 rng(55);
  randomize_thetas(net, rng);
  std::stringstream ss;
  save_network(ss, net);
  Network back = load_network(ss);
  REQUIRE(back.layers.size() == net.layers.size());
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    CHECK(back.layers[l].low == net.layers[l].low);
    CHECK(back.layers[l].high == net.layers[l].high);
    CHECK(back.layers[l].weight == net.layers[l].weight);
  }
  CHECK(back.activation == net.activation);
  CHECK(back.tie_theta);
  CHECK(forward(back, fx.d, fx.x) == forward(net, fx.d, fx.x));

  std::string bytes = ss.str();
  std::istringstream truncated(bytes.substr(0, bytes.size() - 5));
  CHECK_THROWS(load_network(truncated));
}
