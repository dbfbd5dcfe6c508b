#pragma once

#include "mhkg/mhkg.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cli {

using nlohmann::json;

class ConfigError : public mhkg::ValidationError {
 public:
  ConfigError(const std::string& path, const std::string& what);
};

// A JSON object that remembers which keys were read so unknown ones can be
// reported with their full path.
class Section {
 public:
  Section(const json& j, std::string path);

  const std::string& path() const { return path_; }
  std::string child_path(const std::string& key) const;
  bool has(const std::string& key) const;
  const json& raw(const std::string& key);  // marks the key as read; throws if absent
  Section object(const std::string& key);

  double number(const std::string& key, std::optional<double> fallback = std::nullopt);
  std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt);
  bool boolean(const std::string& key, std::optional<bool> fallback = std::nullopt);
  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt);
  std::vector<double> numbers(const std::string& key);

  // Throws on the first key that was never read.
  void finish() const;

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

// Filter description that is materialized once the spectrum size is known.
struct FilterJson {
  mhkg::FilterFamily family = mhkg::FilterFamily::zero();
  std::vector<double> theta{1.0};  // one value broadcasts
  double gamma = 1.0;
  bool rescale = false;
  mhkg::FilterSpec materialize(mhkg::Index n, const std::string& path) const;
};

struct PairJson {
  FilterJson low;
  FilterJson high;
  mhkg::FilterPair materialize(mhkg::Index n, const std::string& path) const;
};

struct DatasetConfig {
  std::optional<mhkg::CsbmParams> csbm;
  std::filesystem::path edges;
  std::optional<std::filesystem::path> features;
  std::optional<std::filesystem::path> labels;
};

// How a command picks its filters: explicit pair, named presets, or a zeta sweep.
struct FilterChoice {
  std::optional<PairJson> pair;
  std::vector<mhkg::Preset> presets;
  std::vector<double> zetas;
};

struct DynamicsConfig {
  std::optional<int> steps;  // empty = choose from the response
  int channels = 4;
};

struct OsqConfig {
  int depth = 1;
  double w = 1.0;
};

struct TrainBlock {
  mhkg::ClassificationSetup setup;
  int runs = 10;
  std::array<double, 3> split{0.6, 0.2, 0.2};
  std::optional<std::filesystem::path> checkpoint;
};

struct TradeoffConfig {
  PairJson first;
  PairJson second;
  int channels = 3;
  int depth = 1;
  double w = 1.0;
  int random_pairs = 0;
};

struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;
  json effective;  // the config after overrides, used for hashing
  DatasetConfig dataset;
  FilterChoice filters;
  DynamicsConfig dynamics;
  OsqConfig osq;
  TrainBlock train;
  TradeoffConfig tradeoff;
};

// Parses and validates the whole document for `command` before any data is read.
RunConfig load_config(const std::filesystem::path& file, const std::string& command,
                      std::optional<std::uint64_t> seed_override);
RunConfig parse_config(const json& doc, const std::string& command, const std::filesystem::path& base_dir,
                       std::optional<std::uint64_t> seed_override);

std::string config_hash(const json& effective);

}  // namespace cli
