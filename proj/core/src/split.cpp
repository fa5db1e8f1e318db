#include "cgmn/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cgmn/error.hpp"
#include "cgmn/rng.hpp"

namespace cgmn {

DatasetSplit split_dataset(std::size_t count, SplitFractions f, std::uint64_t seed) {
  if (count == 0) throw DataError("split_dataset: empty pair list");
  if (f.train < 0 || f.valid < 0 || f.test < 0) {
    throw ConfigError("split_dataset: fractions must be nonnegative");
  }
  if (std::abs(f.train + f.valid + f.test - 1.0) > 1e-9) {
    throw ConfigError("split_dataset: fractions must sum to 1");
  }

  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, {0x5u}));
  rng.shuffle(order);

  const auto n = static_cast<double>(count);
  const auto n_train = std::min(count, static_cast<std::size_t>(std::llround(f.train * n)));
  const auto n_valid =
      std::min(count - n_train, static_cast<std::size_t>(std::llround(f.valid * n)));

  DatasetSplit s;
  s.seed = seed;
  s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.valid.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                 order.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid));
  s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid), order.end());
  return s;
}

}  // namespace cgmn
