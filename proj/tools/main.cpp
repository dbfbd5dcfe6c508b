#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using Command = int (*)(const cli::RunConfig&, const std::filesystem::path&);

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-scale heat-kernel graph filtering: spectra, dynamics, over-squashing and training"};
  app.set_version_flag("--version", std::string(MHKG_VERSION));
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> names{
      {"spectrum", "Export the normalized Laplacian spectrum"},
      {"dynamics", "Simulate energy dynamics and classify them as LFD or HFD"},
      {"osq", "Export pairwise sensitivity bounds and over-squashing scores"},
      {"train", "Train node classifiers over several seeds"},
      {"tradeoff", "Compare energies and over-squashing of two dominated filter pairs"},
      {"generate", "Write a synthetic cSBM dataset to files"}};
  const std::map<std::string, Command> commands{
      {"spectrum", cli::cmd_spectrum}, {"dynamics", cli::cmd_dynamics}, {"osq", cli::cmd_osq},
      {"train", cli::cmd_train},       {"tradeoff", cli::cmd_tradeoff}, {"generate", cli::cmd_generate}};

  std::string config, out;
  std::optional<std::uint64_t> seed_override;
  for (const auto& [name, help] : names) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output directory")->required();
    sub->add_option("--seed-override", seed_override, "Replace the config's top-level seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const auto rc = cli::load_config(config, command, seed_override);
    std::filesystem::create_directories(out);
    cli::write_provenance(rc, out);
    return commands.at(command)(rc, out);
  } catch (const mhkg::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 2;
  }
}
