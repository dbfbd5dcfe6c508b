#include "config.hpp"

#include <cstdio>
#include <fstream>
#include <map>

namespace cli {

using namespace mhkg;

ConfigError::ConfigError(const std::string& path, const std::string& what)
    : ValidationError("config " + (path.empty() ? std::string("<root>") : path) + ": " + what) {}

Section::Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
  if (!j_.is_object()) throw ConfigError(path_, "expected an object");
}

std::string Section::child_path(const std::string& key) const {
  return path_.empty() ? key : path_ + "." + key;
}

bool Section::has(const std::string& key) const { return j_.contains(key); }

const json& Section::raw(const std::string& key) {
  if (!j_.contains(key)) throw ConfigError(child_path(key), "missing required key");
  used_.insert(key);
  return j_.at(key);
}

Section Section::object(const std::string& key) { return Section(raw(key), child_path(key)); }

double Section::number(const std::string& key, std::optional<double> fallback) {
  if (!has(key) && fallback) return *fallback;
  const json& v = raw(key);
  if (!v.is_number()) throw ConfigError(child_path(key), "expected a number");
  return v.get<double>();
}

std::int64_t Section::integer(const std::string& key, std::optional<std::int64_t> fallback) {
  if (!has(key) && fallback) return *fallback;
  const json& v = raw(key);
  if (!v.is_number_integer()) throw ConfigError(child_path(key), "expected an integer");
  return v.get<std::int64_t>();
}

bool Section::boolean(const std::string& key, std::optional<bool> fallback) {
  if (!has(key) && fallback) return *fallback;
  const json& v = raw(key);
  if (!v.is_boolean()) throw ConfigError(child_path(key), "expected true or false");
  return v.get<bool>();
}

std::string Section::string(const std::string& key, std::optional<std::string> fallback) {
  if (!has(key) && fallback) return *fallback;
  const json& v = raw(key);
  if (!v.is_string()) throw ConfigError(child_path(key), "expected a string");
  return v.get<std::string>();
}

std::vector<double> Section::numbers(const std::string& key) {
  const json& v = raw(key);
  if (!v.is_array()) throw ConfigError(child_path(key), "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(child_path(key) + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

void Section::finish() const {
  for (const auto& [key, value] : j_.items()) {
    if (!used_.count(key)) throw ConfigError(child_path(key), "unknown key");
  }
}

FilterSpec FilterJson::materialize(Index n, const std::string& path) const {
  FilterSpec s = FilterSpec::uniform(family, n, theta.front(), gamma, rescale);
  if (theta.size() > 1) {
    if (static_cast<Index>(theta.size()) != n) {
      throw ConfigError(path + ".theta", "has " + std::to_string(theta.size()) + " entries but the graph has " +
                                             std::to_string(n) + " eigenvalues");
    }
    s.theta = Eigen::Map<const Vector>(theta.data(), n);
  }
  return s;
}

FilterPair PairJson::materialize(Index n, const std::string& path) const {
  return {low.materialize(n, path + ".low"), high.materialize(n, path + ".high")};
}

namespace {

FilterJson parse_filter(Section s) {
  FilterJson f;
  const std::string name = s.string("family");
  std::vector<double> coeffs;
  if (s.has("coefficients")) coeffs = s.numbers("coefficients");
  const double value = s.number("value", 0.0);
  try {
    f.family = FilterFamily::from_name(name, coeffs, value);
  } catch (const ValidationError& e) {
    throw ConfigError(s.child_path("family"), e.what());
  }
  if (s.boolean("squared", false)) f.family = f.family.squared();
  if (s.has("theta")) {
    const json& t = s.raw("theta");
    if (t.is_number()) {
      f.theta = {t.get<double>()};
    } else {
      f.theta = s.numbers("theta");
      if (f.theta.empty()) throw ConfigError(s.child_path("theta"), "must not be empty");
    }
  }
  for (double t : f.theta)
    if (!std::isfinite(t)) throw ConfigError(s.child_path("theta"), "must be finite");
  f.gamma = s.number("gamma", 1.0);
  if (!std::isfinite(f.gamma)) throw ConfigError(s.child_path("gamma"), "must be finite");
  f.rescale = s.boolean("rescale", false);
  s.finish();
  return f;
}

PairJson parse_pair(Section s) {
  PairJson p{parse_filter(s.object("low")), parse_filter(s.object("high"))};
  s.finish();
  return p;
}

CsbmParams parse_csbm(Section s, std::uint64_t seed) {
  CsbmParams p;
  p.n_nodes = static_cast<int>(s.integer("n_nodes", p.n_nodes));
  p.n_classes = static_cast<int>(s.integer("n_classes", p.n_classes));
  p.p_intra = s.number("p_intra", p.p_intra);
  p.p_inter = s.number("p_inter", p.p_inter);
  p.feature_dim = static_cast<int>(s.integer("feature_dim", p.feature_dim));
  p.signal = s.number("signal", p.signal);
  p.noise_sd = s.number("noise_sd", p.noise_sd);
  p.seed = seed;
  s.finish();
  try {
    validate(p);
  } catch (const ValidationError& e) {
    throw ConfigError(s.path(), e.what());
  }
  return p;
}

DatasetConfig parse_dataset(Section s, std::uint64_t seed, const std::filesystem::path& base) {
  DatasetConfig d;
  if (s.has("csbm")) {
    if (s.has("edges")) throw ConfigError(s.path(), "give either csbm or edges, not both");
    d.csbm = parse_csbm(s.object("csbm"), seed);
  } else {
    auto resolve = [&](const std::string& name) { std::filesystem::path p(name); return p.is_absolute() ? p : base / p; };
    d.edges = resolve(s.string("edges"));
    if (s.has("features")) d.features = resolve(s.string("features"));
    if (s.has("labels")) d.labels = resolve(s.string("labels"));
  }
  s.finish();
  return d;
}

FilterChoice parse_filter_choice(Section& root, bool allow_many_presets, bool allow_zeta, bool required) {
  FilterChoice c;
  int given = 0;
  if (root.has("filters")) {
    c.pair = parse_pair(root.object("filters"));
    ++given;
  }
  if (root.has("preset")) {
    const json& p = root.raw("preset");
    const std::string path = root.child_path("preset");
    std::vector<std::string> names;
    if (p.is_string() && p.get<std::string>() == "all") {
      for (Preset x : all_presets()) names.push_back(to_string(x));
    } else if (p.is_string()) {
      names.push_back(p.get<std::string>());
    } else if (p.is_array()) {
      for (const auto& e : p) {
        if (!e.is_string()) throw ConfigError(path, "expected preset names");
        names.push_back(e.get<std::string>());
      }
    } else {
      throw ConfigError(path, "expected a preset name, a list of names or \"all\"");
    }
    if (names.empty()) throw ConfigError(path, "must name at least one preset");
    if (names.size() > 1 && !allow_many_presets) throw ConfigError(path, "this command takes a single preset");
    for (const auto& n : names) {
      try {
        c.presets.push_back(parse_preset(n));
      } catch (const ValidationError& e) {
        throw ConfigError(path, e.what());
      }
    }
    ++given;
  }
  if (root.has("zeta")) {
    if (!allow_zeta) throw ConfigError(root.child_path("zeta"), "this command does not sweep zeta");
    c.zetas = root.numbers("zeta");
    if (c.zetas.empty()) throw ConfigError(root.child_path("zeta"), "must list at least one value");
    for (double z : c.zetas)
      if (!std::isfinite(z)) throw ConfigError(root.child_path("zeta"), "values must be finite");
    if (!c.presets.empty()) throw ConfigError(root.child_path("zeta"), "cannot be combined with preset");
  } else if (given > 1) {
    throw ConfigError(root.path(), "give either filters or preset, not both");
  }
  if (required && given == 0 && c.zetas.empty()) {
    throw ConfigError(root.path(), std::string("missing filters") + (allow_zeta ? ", preset or zeta" : " or preset"));
  }
  return c;
}

Activation parse_activation(const std::string& s, const std::string& path) {
  if (s == "none") return Activation::None;
  if (s == "relu") return Activation::ReLU;
  throw ConfigError(path, "expected none or relu");
}

Mode parse_mode(const std::string& s, const std::string& path) {
  if (s == "gmhkg") return Mode::GMHKG;
  if (s == "mhkg") return Mode::MHKG;
  throw ConfigError(path, "expected gmhkg or mhkg");
}

InitScheme parse_init(const std::string& s, const std::string& path) {
  if (s == "uniform") return InitScheme::Uniform;
  if (s == "glorot") return InitScheme::Glorot;
  throw ConfigError(path, "expected uniform or glorot");
}

TrainBlock parse_train(Section s, const std::filesystem::path& base) {
  TrainBlock t;
  auto& st = t.setup;
  t.runs = static_cast<int>(s.integer("runs", 10));
  if (t.runs < 1) throw ConfigError(s.child_path("runs"), "must be at least 1");
  st.depth = static_cast<int>(s.integer("depth", st.depth));
  st.hidden = static_cast<int>(s.integer("hidden", st.hidden));
  if (st.depth < 1) throw ConfigError(s.child_path("depth"), "must be at least 1");
  if (st.hidden < 1) throw ConfigError(s.child_path("hidden"), "must be at least 1");
  st.activation = parse_activation(s.string("activation", "relu"), s.child_path("activation"));
  st.mode = parse_mode(s.string("mode", "gmhkg"), s.child_path("mode"));
  st.init = parse_init(s.string("init", "uniform"), s.child_path("init"));
  st.train_theta = s.boolean("train_theta", st.train_theta);
  st.train_weight = s.boolean("train_weight", st.train_weight);
  st.tie_theta = s.boolean("tie_theta", st.tie_theta);
  st.train.learning_rate = s.number("learning_rate", st.train.learning_rate);
  st.train.weight_decay = s.number("weight_decay", st.train.weight_decay);
  st.train.max_epochs = static_cast<int>(s.integer("epochs", st.train.max_epochs));
  st.train.patience = static_cast<int>(s.integer("patience", st.train.patience));
  if (!(st.train.learning_rate > 0.0)) throw ConfigError(s.child_path("learning_rate"), "must be positive");
  if (!(st.train.weight_decay >= 0.0)) throw ConfigError(s.child_path("weight_decay"), "must be non-negative");
  if (st.train.max_epochs < 1) throw ConfigError(s.child_path("epochs"), "must be at least 1");
  if (st.train.patience < 0) throw ConfigError(s.child_path("patience"), "must be non-negative");
  if (s.has("split")) {
    const auto r = s.numbers("split");
    if (r.size() != 3) throw ConfigError(s.child_path("split"), "expected [train, val, test] ratios");
    double sum = 0.0;
    for (double x : r) {
      if (!(x > 0.0)) throw ConfigError(s.child_path("split"), "ratios must be positive");
      sum += x;
    }
    if (sum > 1.0 + 1e-12) throw ConfigError(s.child_path("split"), "ratios sum above 1");
    t.split = {r[0], r[1], r[2]};
  }
  if (s.has("checkpoint")) {
    std::filesystem::path p = s.string("checkpoint");
    t.checkpoint = p.is_absolute() ? p : base / p;
  }
  s.finish();
  return t;
}

}  // namespace

RunConfig parse_config(const json& doc, const std::string& command, const std::filesystem::path& base_dir,
                       std::optional<std::uint64_t> seed_override) {
  static const std::map<std::string, std::set<std::string>> allowed{
      {"spectrum", {"dataset"}},
      {"generate", {"dataset"}},
      {"dynamics", {"dataset", "filters", "preset", "zeta", "dynamics"}},
      {"osq", {"dataset", "filters", "preset", "osq"}},
      {"train", {"dataset", "filters", "preset", "zeta", "train"}},
      {"tradeoff", {"dataset", "tradeoff"}},
  };
  const auto it = allowed.find(command);
  if (it == allowed.end()) throw ConfigError("", "unknown command '" + command + "'");

  RunConfig rc;
  rc.command = command;
  rc.effective = doc;
  if (!doc.is_object()) throw ConfigError("", "expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "seed" && key != "description" && !it->second.count(key)) {
      throw ConfigError(key, "unknown key for command '" + command + "'");
    }
  }
  if (seed_override) rc.effective["seed"] = *seed_override;

  Section root(rc.effective, "");
  if (root.has("description")) root.string("description");
  const std::int64_t seed = root.integer("seed", 0);
  if (seed < 0) throw ConfigError("seed", "must be non-negative");
  rc.seed = static_cast<std::uint64_t>(seed);

  rc.dataset = parse_dataset(root.object("dataset"), rc.seed, base_dir);
  if (command == "generate" && !rc.dataset.csbm) throw ConfigError("dataset", "generate needs a csbm block");

  if (command == "dynamics") {
    rc.filters = parse_filter_choice(root, true, true, true);
    Section s = root.object("dynamics");
    const json& steps = s.raw("steps");
    if (steps.is_string() && steps.get<std::string>() == "auto") {
      rc.dynamics.steps.reset();
    } else if (steps.is_number_integer()) {
      const auto v = steps.get<std::int64_t>();
      if (v < 1) throw ConfigError("dynamics.steps", "must simulate at least one step");
      rc.dynamics.steps = static_cast<int>(v);
    } else {
      throw ConfigError("dynamics.steps", "expected a positive integer or \"auto\"");
    }
    rc.dynamics.channels = static_cast<int>(s.integer("channels", 4));
    if (rc.dynamics.channels < 1) throw ConfigError("dynamics.channels", "must be at least 1");
    s.finish();
  } else if (command == "osq") {
    rc.filters = parse_filter_choice(root, false, false, true);
    Section s = root.object("osq");
    rc.osq.depth = static_cast<int>(s.integer("depth"));
    rc.osq.w = s.number("w", 1.0);
    if (rc.osq.depth < 1) throw ConfigError("osq.depth", "must be at least 1");
    if (!(rc.osq.w >= 0.0) || !std::isfinite(rc.osq.w)) throw ConfigError("osq.w", "must be finite and non-negative");
    s.finish();
  } else if (command == "train") {
    rc.train = parse_train(root.object("train"), base_dir);
    rc.filters = parse_filter_choice(root, false, true, !rc.train.checkpoint);
    if (rc.train.checkpoint && (rc.filters.pair || !rc.filters.presets.empty() || !rc.filters.zetas.empty())) {
      throw ConfigError("train.checkpoint", "a checkpoint carries its own filters; drop filters, preset and zeta");
    }
  } else if (command == "tradeoff") {
    Section s = root.object("tradeoff");
    rc.tradeoff.first = parse_pair(s.object("first"));
    rc.tradeoff.second = parse_pair(s.object("second"));
    rc.tradeoff.channels = static_cast<int>(s.integer("channels", 3));
    rc.tradeoff.depth = static_cast<int>(s.integer("depth", 1));
    rc.tradeoff.w = s.number("w", 1.0);
    rc.tradeoff.random_pairs = static_cast<int>(s.integer("random_pairs", 0));
    if (rc.tradeoff.channels < 1) throw ConfigError("tradeoff.channels", "must be at least 1");
    if (rc.tradeoff.depth < 1) throw ConfigError("tradeoff.depth", "must be at least 1");
    if (!(rc.tradeoff.w >= 0.0)) throw ConfigError("tradeoff.w", "must be non-negative");
    if (rc.tradeoff.random_pairs < 0) throw ConfigError("tradeoff.random_pairs", "must be non-negative");
    s.finish();
  }
  root.finish();
  return rc;
}

RunConfig load_config(const std::filesystem::path& file, const std::string& command,
                      std::optional<std::uint64_t> seed_override) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open config file " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config " + file.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc, command, file.parent_path(), seed_override);
}

std::string config_hash(const json& effective) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : effective.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cli
