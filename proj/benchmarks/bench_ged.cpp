#include <benchmark/benchmark.h>

#include "cgmn/ged.hpp"
#include "cgmn/synthetic.hpp"

namespace {

void BM_GedExact(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  cgmn::Rng rng(17);
  std::vector<std::pair<cgmn::Graph, cgmn::Graph>> pairs;
  for (int i = 0; i < 16; ++i)
    pairs.emplace_back(cgmn::random_graph("a", n, 4, 0.2, rng), cgmn::random_graph("b", n, 4, 0.2, rng));
  std::size_t i = 0, expanded = 0;
  for (auto _ : state) {
    const auto& [a, b] = pairs[i++ % pairs.size()];
    const auto r = cgmn::ged_exact(a, b);
    expanded += r.expanded;
    benchmark::DoNotOptimize(r.cost);
  }
  state.counters["expanded"] = benchmark::Counter(static_cast<double>(expanded), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_GedExact)->DenseRange(4, 8)->Unit(benchmark::kMicrosecond);

void BM_GedBruteforce(benchmark::State& state) {
  cgmn::Rng rng(1);
  const auto a = cgmn::random_graph("a", 4, 1, 0.3, rng);
  const auto b = cgmn::random_graph("b", 4, 1, 0.3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(cgmn::ged_bruteforce(a, b));
}
BENCHMARK(BM_GedBruteforce);

}  // namespace
