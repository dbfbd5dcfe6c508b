#pragma once

#include "mhkg/model.hpp"

#include <filesystem>
#include <iosfwd>

namespace mhkg {

// One JSON header line (shapes, families, options, value count) followed by
// the raw little-endian float64 values, row-major, layer by layer:
// theta_low, theta_high, weight.
void save_network(std::ostream& out, const Network& net);
Network load_network(std::istream& in);

void save_network(const std::filesystem::path& path, const Network& net);
Network load_network(const std::filesystem::path& path);

}  // namespace mhkg
