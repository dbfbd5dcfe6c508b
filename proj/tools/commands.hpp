#pragma once

#include "config.hpp"

#include <filesystem>

namespace cli {

// Each command writes its files under `out` and returns the process exit code.
int cmd_spectrum(const RunConfig& rc, const std::filesystem::path& out);
int cmd_generate(const RunConfig& rc, const std::filesystem::path& out);
int cmd_dynamics(const RunConfig& rc, const std::filesystem::path& out);
int cmd_osq(const RunConfig& rc, const std::filesystem::path& out);
int cmd_train(const RunConfig& rc, const std::filesystem::path& out);
int cmd_tradeoff(const RunConfig& rc, const std::filesystem::path& out);

void write_provenance(const RunConfig& rc, const std::filesystem::path& out);

}  // namespace cli
