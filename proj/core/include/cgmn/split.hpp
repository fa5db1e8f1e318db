#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace cgmn {

// Disjoint, exhaustive partition of pair indices.
struct DatasetSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> valid;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;
};

struct SplitFractions {
  double train = 0.6;
  double valid = 0.2;
  double test = 0.2;
};

// Seeded shuffle of [0, count) followed by contiguous slicing.
// |train| = round(f_train * N), |valid| = min(round(f_valid * N), rest),
// test takes the remainder.
DatasetSplit split_dataset(std::size_t count, SplitFractions fractions, std::uint64_t seed);

}  // namespace cgmn
