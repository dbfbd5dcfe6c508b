#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace cli {

using namespace mhkg;
namespace fs = std::filesystem;

namespace {

std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// JSON has no infinity; the over-squashing sentinel is written as the string "inf".
json jnum(double x) { return std::isfinite(x) ? json(x) : json(num(x)); }

void write_json(const fs::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

std::string file_stem(std::string name) {
  for (char& c : name)
    if (c == '+') c = '_';
  return name;
}

Dataset load(const DatasetConfig& dc) {
  if (dc.csbm) return csbm_generate(*dc.csbm);
  return load_dataset(dc.edges, dc.features, dc.labels);
}

json homophily_json(const Graph& g) {
  if (!g.has_labels() || g.edges().empty()) return nullptr;
  return homophily_level(g);
}

Matrix gaussian(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = nd(rng);
  return m;
}

struct NamedPair {
  std::string name;
  FilterPair pair;
  std::optional<Preset> preset;
  std::optional<double> zeta;
};

FilterPair preset_or_refuse(Preset p, const Spectrum& d) {
  try {
    return preset_pair(p, d, zero_multiplicity(d));
  } catch (const ValidationError& e) {
    throw ValidationError("preset " + to_string(p) + " is incompatible with this graph: " + e.what());
  }
}

std::vector<NamedPair> resolve_filters(const FilterChoice& fc, const Spectrum& d) {
  std::vector<NamedPair> out;
  const Index n = d.size();
  for (Preset p : fc.presets) out.push_back({to_string(p), preset_or_refuse(p, d), p, std::nullopt});
  if (!fc.zetas.empty()) {
    for (std::size_t i = 0; i < fc.zetas.size(); ++i) {
      const double z = fc.zetas[i];
      FilterPair pair = zeta_pair(z, n);
      if (fc.pair) {
        pair = fc.pair->materialize(n, "filters");
        pair.high.theta *= z;
      }
      out.push_back({"zeta_" + std::to_string(i), pair, std::nullopt, z});
    }
  } else if (fc.pair) {
    out.push_back({"filters", fc.pair->materialize(n, "filters"), std::nullopt, std::nullopt});
  }
  return out;
}

json osq_summary(const SensitivityReport& rep) {
  const Index n = rep.s.rows();
  std::size_t connected = 0;
  double min_b = kUnreachable, sum_b = 0.0, min_o = kUnreachable, sum_o = 0.0;
  for (Index v = 0; v < n; ++v) {
    for (Index u = 0; u < n; ++u) {
      if (v == u || rep.bound(v, u) == 0.0) continue;
      ++connected;
      min_b = std::min(min_b, rep.bound(v, u));
      sum_b += rep.bound(v, u);
      min_o = std::min(min_o, rep.osq(v, u));
      sum_o += rep.osq(v, u);
    }
  }
  json j{{"depth", rep.ell},
         {"w", rep.w},
         {"negative_entries", rep.negative_entries},
         {"connected_pairs", connected},
         {"unreachable_pairs", static_cast<std::size_t>(n * (n - 1)) - connected}};
  if (connected > 0) {
    j["min_bound"] = min_b;
    j["mean_bound"] = sum_b / connected;
    j["min_osq"] = jnum(min_o);
    j["mean_osq"] = jnum(sum_o / connected);
  } else {
    j["min_bound"] = j["mean_bound"] = nullptr;
    j["min_osq"] = j["mean_osq"] = "inf";
  }
  return j;
}

}  // namespace

void write_provenance(const RunConfig& rc, const fs::path& out) {
  json j{{"command", rc.command},
         {"config_hash", "fnv1a64:" + config_hash(rc.effective)},
         {"version", MHKG_VERSION},
         {"preset_version", kPresetVersion},
         {"seed", rc.seed},
         {"config", rc.effective}};
  write_json(out / "provenance.json", j);
}

int cmd_spectrum(const RunConfig& rc, const fs::path& out) {
  const Dataset ds = load(rc.dataset);
  const Spectrum d = laplacian_spectrum(ds.graph);
  std::ostringstream csv;
  csv << "index,lambda\n";
  for (Index i = 0; i < d.size(); ++i) csv << i << ',' << num(d.eigenvalues(i)) << '\n';
  write_text_file(out / "eigenvalues.csv", csv.str());
  write_json(out / "meta.json", json{{"n", d.size()},
                                     {"k", zero_multiplicity(d)},
                                     {"components", ds.graph.num_components()},
                                     {"rho", d.rho},
                                     {"homophily", homophily_json(ds.graph)}});
  return 0;
}

int cmd_generate(const RunConfig& rc, const fs::path& out) {
  const Dataset ds = load(rc.dataset);
  save_dataset(ds, out / "edges.txt", out / "features.csv", out / "labels.txt");
  write_json(out / "meta.json", json{{"n", ds.graph.num_nodes()},
                                     {"edges", ds.graph.edges().size()},
                                     {"components", ds.graph.num_components()},
                                     {"homophily", homophily_json(ds.graph)}});
  return 0;
}

int cmd_dynamics(const RunConfig& rc, const fs::path& out) {
  const Dataset ds = load(rc.dataset);
  const Spectrum d = laplacian_spectrum(ds.graph);
  const Index n = d.size(), k = zero_multiplicity(d);
  const auto configs = resolve_filters(rc.filters, d);
  std::mt19937_64 rng(rc.seed);
  const Matrix h0 = gaussian(n, rc.dynamics.channels, rng);
  const Matrix w = Matrix::Identity(rc.dynamics.channels, rc.dynamics.channels);

  std::ostringstream summary;
  summary << "name,zeta,verdict,steps,final_energy,final_rayleigh,dominant_frequency,top_residual\n";
  for (const auto& c : configs) {
    const Vector r = combined_response(c.pair.low, c.pair.high, d);
    const int steps = rc.dynamics.steps ? *rc.dynamics.steps : steps_to_converge(r, d);
    const auto rep = simulate(LayerSpec{c.pair.low, c.pair.high, w}, d, h0, steps);

    std::ostringstream csv;
    csv << "step,energy,rayleigh\n";
    for (Index t = 0; t < rep.energy.size(); ++t)
      csv << t << ',' << num(rep.energy(t)) << ',' << num(rep.rayleigh(t)) << '\n';
    write_text_file(out / ("energy_" + file_stem(c.name) + ".csv"), csv.str());

    json v{{"name", c.name},
           {"verdict", to_string(rep.verdict)},
           {"steps", steps},
           {"final_energy", rep.energy(rep.energy.size() - 1)},
           {"final_rayleigh", rep.rayleigh(rep.rayleigh.size() - 1)},
           {"rho", d.rho},
           {"k", k},
           {"top_residual", rep.top_residual},
           {"monotonicity", to_string(monotonicity(r, d))}};
    v["dominant_frequency"] = rep.dominant_frequency ? json(*rep.dominant_frequency) : json(nullptr);
    if (c.zeta) v["zeta"] = *c.zeta;
    if (c.preset) v["preset_version"] = kPresetVersion;
    if (c.preset == Preset::DHFDDecOSQ || c.preset == Preset::DHFDIncOSQ) {
      bool le = true, zeros = true;
      for (Index i = 0; i < n; ++i) {
        if (r(i) > d.eigenvalues(i) + 1e-12) le = false;
        if (i < k && std::abs(r(i)) > 1e-12) zeros = false;
      }
      v["response_le_lambda"] = le;
      v["first_k_zero"] = zeros;
    }
    write_json(out / ("verdict_" + file_stem(c.name) + ".json"), v);

    summary << c.name << ',' << (c.zeta ? num(*c.zeta) : "") << ',' << to_string(rep.verdict) << ','
            << steps << ',' << num(rep.energy(rep.energy.size() - 1)) << ','
            << num(rep.rayleigh(rep.rayleigh.size() - 1)) << ','
            << (rep.dominant_frequency ? num(*rep.dominant_frequency) : "") << ',' << num(rep.top_residual)
            << '\n';
  }
  write_text_file(out / "summary.csv", summary.str());
  return 0;
}

int cmd_osq(const RunConfig& rc, const fs::path& out) {
  const Dataset ds = load(rc.dataset);
  const Spectrum d = laplacian_spectrum(ds.graph);
  const Index n = d.size();
  const auto configs = resolve_filters(rc.filters, d);
  const FilterPair& pair = configs.front().pair;
  const auto rep = with_depth(build_s(pair.low, pair.high, d), rc.osq.w, rc.osq.depth);

  std::ostringstream csv;
  csv << "v,u,s_power,bound,osq\n";
  for (Index v = 0; v < n; ++v)
    for (Index u = 0; u < n; ++u)
      csv << v << ',' << u << ',' << num(rep.s_pow(v, u)) << ',' << num(rep.bound(v, u)) << ','
          << num(rep.osq(v, u)) << '\n';
  write_text_file(out / "bounds.csv", csv.str());

  // Single-channel linear network with weight w per layer, pushed through
  // the identity basis: entry (v, u) is the Jacobian d h_v / d x_u.
  const std::vector<Matrix> ws(rc.osq.depth, rc.osq.w * Matrix::Identity(n, n));
  const Matrix jac = spatial_forward(rep.s, Matrix::Identity(n, n), ws);
  const double gap = (jac.cwiseAbs() - rep.bound).cwiseAbs().maxCoeff();

  json j = osq_summary(rep);
  j["name"] = configs.front().name;
  j["n"] = n;
  j["identity_weight_check"] = json{{"max_abs_exact_minus_bound", gap}, {"within_1e-9", gap <= 1e-9}};
  write_json(out / "summary.json", j);
  return 0;
}

int cmd_train(const RunConfig& rc, const fs::path& out) {
  const Dataset ds = load(rc.dataset);
  require(!ds.labels.empty(), "training needs node labels");
  require(ds.features.rows() == ds.graph.num_nodes(), "training needs node features");
  const Spectrum d = laplacian_spectrum(ds.graph);
  const Split split = make_split(ds.graph.num_nodes(), rc.train.split, rc.seed);
  const auto& setup = rc.train.setup;

  std::optional<Network> base;
  std::vector<NamedPair> configs;
  if (rc.train.checkpoint) {
    base = load_network(*rc.train.checkpoint);
    base->train_theta = setup.train_theta;
    base->train_weight = setup.train_weight;
    validate_network(*base, d);
    configs.push_back({"checkpoint", {}, std::nullopt, std::nullopt});
  } else {
    configs = resolve_filters(rc.filters, d);
  }

  json sweep = json::array();
  std::ostringstream sweep_csv;
  sweep_csv << "zeta,mean_test_accuracy,sd_test_accuracy,completed_runs\n";
  std::size_t completed_total = 0;
  for (std::size_t ci = 0; ci < configs.size(); ++ci) {
    const auto& c = configs[ci];
    const std::string prefix = configs.size() > 1 ? file_stem(c.name) + "_" : "";
    json runs = json::array();
    std::vector<double> accs;
    for (int r = 0; r < rc.train.runs; ++r) {
      const std::uint64_t seed = rc.seed + static_cast<std::uint64_t>(r);
      json run{{"run", r}, {"seed", seed}};
      try {
        const TrainResult res = base ? train(*base, d, ds.features, ds.labels, split, setup.train)
                                     : run_classification(ds, d, split, c.pair, setup, seed);
        std::ostringstream csv;
        csv << "epoch,train_loss,train_accuracy,val_accuracy,test_accuracy\n";
        for (const auto& m : res.trace)
          csv << m.epoch << ',' << num(m.train_loss) << ',' << num(m.train_accuracy) << ','
              << num(m.val_accuracy) << ',' << num(m.test_accuracy) << '\n';
        write_text_file(out / (prefix + "metrics_run" + std::to_string(r) + ".csv"), csv.str());
        save_network(out / (prefix + "model_run" + std::to_string(r) + ".bin"), res.network);
        run["status"] = "ok";
        run["best_epoch"] = res.best_epoch;
        run["best_val_accuracy"] = res.best_val_accuracy;
        run["test_accuracy"] = res.test_accuracy;
        accs.push_back(res.test_accuracy);
      } catch (const TrainingDiverged& e) {
        run["status"] = "diverged";
        run["epoch"] = e.epoch();
        std::cerr << c.name << " run " << r << ": " << e.what() << '\n';
      }
      runs.push_back(run);
    }
    completed_total += accs.size();
    const MeanSd ms = mean_sd(accs);
    json agg{{"name", c.name}, {"runs", runs}, {"completed_runs", accs.size()}};
    agg["mean_test_accuracy"] = accs.empty() ? json(nullptr) : json(ms.mean);
    agg["sd_test_accuracy"] = accs.empty() ? json(nullptr) : json(ms.sd);
    if (c.zeta) {
      agg["zeta"] = *c.zeta;
      sweep_csv << num(*c.zeta) << ',' << (accs.empty() ? "" : num(ms.mean)) << ','
                << (accs.empty() ? "" : num(ms.sd)) << ',' << accs.size() << '\n';
    }
    sweep.push_back(agg);
  }
  json aggregate = sweep.size() == 1 && !configs.front().zeta ? sweep.front() : json{{"sweep", sweep}};
  write_json(out / "aggregate.json", aggregate);
  if (!rc.filters.zetas.empty()) write_text_file(out / "sweep.csv", sweep_csv.str());
  if (completed_total == 0) throw NumericError("every training run diverged");
  return 0;
}

int cmd_tradeoff(const RunConfig& rc, const fs::path& out) {
  const Dataset ds = load(rc.dataset);
  const Spectrum d = laplacian_spectrum(ds.graph);
  const Index n = d.size();
  const auto& tc = rc.tradeoff;
  const FilterPair first = tc.first.materialize(n, "tradeoff.first");
  const FilterPair second = tc.second.materialize(n, "tradeoff.second");
  std::mt19937_64 rng(rc.seed);
  const Matrix h = gaussian(n, tc.channels, rng);
  const Matrix w = gaussian(tc.channels, tc.channels, rng);

  TradeoffResult res;
  try {
    res = tradeoff_check(first.low, first.high, second.low, second.high, d, h, w);
  } catch (const DominanceError& e) {
    const Index i = e.index();
    write_json(out / "tradeoff.json",
               json{{"status", "refused"},
                    {"reason", e.what()},
                    {"violating_index", i},
                    {"eigenvalue", d.eigenvalues(i)},
                    {"response_first", combined_response(first.low, first.high, d)(i)},
                    {"response_second", combined_response(second.low, second.high, d)(i)}});
    std::cerr << "refused: " << e.what() << '\n';
    return 1;
  }

  json j{{"status", "ok"},
         {"result", res.pass ? "PASS" : "FAIL"},
         {"energy_first", res.energy1},
         {"energy_second", res.energy2},
         {"osq_first", osq_summary(with_depth(build_s(first.low, first.high, d), tc.w, tc.depth))},
         {"osq_second", osq_summary(with_depth(build_s(second.low, second.high, d), tc.w, tc.depth))}};
  j["energy_ratio"] = res.energy1 > 0.0 ? json(res.energy2 / res.energy1) : json(nullptr);

  if (tc.random_pairs > 0) {
    // Random dominated pairs: the second pair draws positive gains, the first
    // scales both branches at eigen-index i by a shared factor in (-1, 1).
    std::uniform_real_distribution<double> gain(0.1, 2.0), shrink(-0.99, 0.99);
    std::ostringstream csv;
    csv << "pair,energy_first,energy_second,result\n";
    int passed = 0;
    for (int p = 0; p < tc.random_pairs; ++p) {
      FilterPair b{FilterSpec::uniform(FilterFamily::heat_low(), n), FilterSpec::uniform(FilterFamily::heat_high(), n)};
      for (Index i = 0; i < n; ++i) {
        b.low.theta(i) = gain(rng);
        b.high.theta(i) = gain(rng);
      }
      FilterPair a = b;
      for (Index i = 0; i < n; ++i) {
        const double s = shrink(rng);
        a.low.theta(i) *= s;
        a.high.theta(i) *= s;
      }
      const Matrix hp = gaussian(n, tc.channels, rng);
      const Matrix wp = gaussian(tc.channels, tc.channels, rng);
      const auto rp = tradeoff_check(a.low, a.high, b.low, b.high, d, hp, wp);
      passed += rp.pass;
      csv << p << ',' << num(rp.energy1) << ',' << num(rp.energy2) << ',' << (rp.pass ? "PASS" : "FAIL") << '\n';
    }
    write_text_file(out / "random_pairs.csv", csv.str());
    j["random_pairs"] = json{{"count", tc.random_pairs}, {"passed", passed}};
  }
  write_json(out / "tradeoff.json", j);
  return 0;
}

}  // namespace cli
