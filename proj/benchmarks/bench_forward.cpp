#include <benchmark/benchmark.h>

#include "cgmn/model.hpp"
#include "cgmn/synthetic.hpp"
#include "cgmn/train.hpp"

namespace {

struct Fixture {
  cgmn::Dataset data;
  cgmn::Config cfg;
  cgmn::GcnParams gcn;

  explicit Fixture(int hidden) {
    cgmn::SyntheticConfig sc;
    sc.count = 32;
    sc.label_ged = false;
    data = cgmn::generate_synthetic_pairs(sc).dataset;
    cfg.hidden = hidden;
    gcn = cgmn::ModelParams::init(cfg, data.graphs[0].feature_dim()).gcn;
  }
};

// One pair: views, encoder, both interactions, loss and backward.
void BM_PairGradient(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  const auto& p = f.data.pairs[0];
  const auto views = cgmn::draw_views(f.data.graphs[p.g1], f.data.graphs[p.g2], f.cfg.augment, 1);
  for (auto _ : state) benchmark::DoNotOptimize(cgmn::pair_gradient(f.gcn, views, f.cfg.interaction).loss);
}
BENCHMARK(BM_PairGradient)->Arg(16)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_BatchGradient(benchmark::State& state) {
  Fixture f(100);
  std::vector<std::size_t> batch(32);
  for (std::size_t i = 0; i < batch.size(); ++i) batch[i] = i;
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(cgmn::batch_gradient(f.gcn, f.data, batch, f.cfg, 0, threads).loss);
}
BENCHMARK(BM_BatchGradient)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_EmbedPair(benchmark::State& state) {
  Fixture f(100);
  const auto& p = f.data.pairs[0];
  for (auto _ : state)
    benchmark::DoNotOptimize(
        cgmn::embed_pair(f.gcn, f.data.graphs[p.g1], f.data.graphs[p.g2], f.cfg.interaction).z1.data());
}
BENCHMARK(BM_EmbedPair)->Unit(benchmark::kMicrosecond);

}  // namespace
