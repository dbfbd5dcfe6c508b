#include "mhkg/checkpoint.hpp"

#include <json.hpp>

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace mhkg {

namespace {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "checkpoints assume a little-endian host");

json family_json(const FilterFamily& f) {
  json j{{"name", f.name()}, {"squared", f.is_squared()}};
  if (f.kind() == FamilyKind::ExpOfUser) j["coefficients"] = f.coefficients();
  if (f.kind() == FamilyKind::Constant) j["value"] = f.value();
  return j;
}

FilterFamily family_from_json(const json& j) {
  FilterFamily f = FilterFamily::from_name(j.at("name").get<std::string>(),
                                           j.value("coefficients", std::vector<double>{}),
                                           j.value("value", 0.0));
  return j.at("squared").get<bool>() ? f.squared() : f;
}

json spec_json(const FilterSpec& s) {
  return json{{"family", family_json(s.family)}, {"gamma", s.gamma}, {"rescale", s.rescale},
              {"theta_size", s.theta.size()}};
}

void write_values(std::ostream& out, const double* data, std::size_t count) {
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
}

void read_values(std::istream& in, double* data, std::size_t count) {
  in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(count * sizeof(double))) {
    throw ValidationError("checkpoint payload is truncated");
  }
}

}  // namespace

void save_network(std::ostream& out, const Network& net) {
  json header;
  header["format"] = "mhkg-checkpoint";
  header["version"] = 1;
  header["activation"] = to_string(net.activation);
  header["mode"] = to_string(net.mode);
  header["train_theta"] = net.train_theta;
  header["train_weight"] = net.train_weight;
  header["tie_theta"] = net.tie_theta;
  std::size_t count = 0;
  json layers = json::array();
  for (const auto& l : net.layers) {
    layers.push_back({{"low", spec_json(l.low)},
                      {"high", spec_json(l.high)},
                      {"weight_shape", {l.weight.rows(), l.weight.cols()}}});
    count += l.low.theta.size() + l.high.theta.size() + l.weight.size();
  }
  header["layers"] = layers;
  header["value_count"] = count;
  out << header.dump() << '\n';
  for (const auto& l : net.layers) {
    write_values(out, l.low.theta.data(), l.low.theta.size());
    write_values(out, l.high.theta.data(), l.high.theta.size());
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w = l.weight;
    write_values(out, w.data(), w.size());
  }
  if (!out) throw std::runtime_error("failed writing checkpoint");
}

Network load_network(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("checkpoint header is missing");
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("checkpoint header is not valid JSON: ") + e.what());
  }
  try {
    require(header.at("format") == "mhkg-checkpoint", "not a checkpoint file");
    Network net;
    net.activation = header.at("activation") == "none" ? Activation::None : Activation::ReLU;
    net.mode = header.at("mode") == "mhkg" ? Mode::MHKG : Mode::GMHKG;
    net.train_theta = header.at("train_theta").get<bool>();
    net.train_weight = header.at("train_weight").get<bool>();
    net.tie_theta = header.at("tie_theta").get<bool>();
    for (const auto& jl : header.at("layers")) {
      LayerSpec l;
      for (auto [key, spec] : {std::pair{"low", &l.low}, std::pair{"high", &l.high}}) {
        const auto& js = jl.at(key);
        spec->family = family_from_json(js.at("family"));
        spec->gamma = js.at("gamma").get<double>();
        spec->rescale = js.at("rescale").get<bool>();
        spec->theta.resize(js.at("theta_size").get<Index>());
      }
      const auto shape = jl.at("weight_shape").get<std::vector<Index>>();
      require(shape.size() == 2, "weight shape must have two entries");
      l.weight.resize(shape[0], shape[1]);
      net.layers.push_back(std::move(l));
    }
    for (auto& l : net.layers) {
      read_values(in, l.low.theta.data(), l.low.theta.size());
      read_values(in, l.high.theta.data(), l.high.theta.size());
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w(l.weight.rows(),
                                                                               l.weight.cols());
      read_values(in, w.data(), w.size());
      l.weight = w;
    }
    return net;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed checkpoint header: ") + e.what());
  }
}

void save_network(const std::filesystem::path& path, const Network& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  save_network(out, net);
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  return load_network(in);
}

}  // namespace mhkg
