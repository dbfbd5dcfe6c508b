#pragma once

#include "mhkg/types.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace mhkg {

struct Split {
  std::vector<Index> train;
  std::vector<Index> val;
  std::vector<Index> test;
};

// Seeded shuffle of 0..n-1 partitioned by the (train, val, test) ratios.
Split make_split(int n, const std::array<double, 3>& ratios, std::uint64_t seed);

// Non-empty, in range and pairwise disjoint.
void validate_split(const Split& split, Index n);

}  // namespace mhkg
