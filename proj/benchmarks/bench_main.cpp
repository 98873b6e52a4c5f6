#include <benchmark/benchmark.h>

#include <limits>
#include <random>

#include "bnsl/order_graph.hpp"
#include "support/random_data.hpp"

namespace {

using namespace bnsl;

void BM_ColexRank(benchmark::State& state) {
  const int n = 40;
  const int k = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::vector<VarSet> sets;
  for (int i = 0; i < 1024; ++i) sets.push_back(colex_unrank(LayerRank{rng() % layer_size(n, k)}, k, n));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(colex_rank(sets[i++ & 1023]));
}
BENCHMARK(BM_ColexRank)->Arg(4)->Arg(20);

void BM_ComputeScores(benchmark::State& state) {
  const auto d = testing::random_network_data(static_cast<int>(state.range(0)), 500, 3, 2, 3);
  for (auto _ : state) {
    testing::TempDir tmp;
    storage::WorkDir work(tmp.path());
    benchmark::DoNotOptimize(compute_scores(d, work).ad_nodes);
  }
}
BENCHMARK(BM_ComputeScores)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_DirectScore(benchmark::State& state) {
  const auto d = testing::random_network_data(10, 500, 3, 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(mdl_score_direct(d, 0, VarSet{0b1110}));
}
BENCHMARK(BM_DirectScore);

void BM_Learn(benchmark::State& state) {
  const auto d = testing::random_network_data(12, 300, 5, 2, 3);
  LearnOptions opts;
  opts.parent_pruning = state.range(0) != 0;
  opts.max_ram_nodes = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(learn(d, opts).score);
}
BENCHMARK(BM_Learn)->Args({0, 1 << 20})->Args({1, 1 << 20})->Args({0, 64})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
