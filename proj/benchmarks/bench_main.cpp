#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "mlink/aggregate.hpp"
#include "mlink/metrics.hpp"
#include "mlink/pipeline.hpp"
#include "mlink/synthgen.hpp"

using namespace mlink;

namespace {

MultiplexSeries bench_series(std::size_t nodes, std::size_t edges) {
  GenParams g;
  g.nodes = nodes;
  g.layers = 3;
  g.snapshots = 8;
  g.edges_per_snapshot = edges;
  g.rho = 0.4;
  g.seed = 7;
  return generate(g);
}

void BM_Metric(benchmark::State& state) {
  const auto metric = static_cast<Metric>(state.range(0));
  const auto s = bench_series(1000, 300);
  const auto g = window_union(s, 0, {0, 2});
  const auto c = candidate_pairs(s, 0, {0, 2}, CandidatePolicy::kActiveNodesOnly);
  for (auto _ : state) benchmark::DoNotOptimize(score(metric, g, c));
  state.SetLabel(std::string(metric_name(metric)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.size()));
}
BENCHMARK(BM_Metric)->DenseRange(0, 7)->Unit(benchmark::kMillisecond);

void BM_Borda(benchmark::State& state) {
  const auto s = bench_series(1000, 300);
  const auto g = window_union(s, 0, {0, 2});
  const auto c = candidate_pairs(s, 0, {0, 2}, CandidatePolicy::kActiveNodesOnly);
  std::vector<ScoreMatrix> ms;
  for (auto m : kAllMetrics) ms.push_back(score(m, g, c));
  for (auto _ : state) benchmark::DoNotOptimize(borda(std::span<const ScoreMatrix>(ms), c));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.size() * ms.size()));
}
BENCHMARK(BM_Borda)->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state) {
  const auto s = bench_series(static_cast<std::size_t>(state.range(0)), 300);
  const std::vector<const char*> names{"hybrid", "likelihood+rank", "rank-only", "likelihood-only"};
  const auto spec = PredictorSpec::from_name(names[static_cast<std::size_t>(state.range(1))]);
  for (auto _ : state) benchmark::DoNotOptimize(predict(s, 0, 6, spec));
  state.SetLabel(names[static_cast<std::size_t>(state.range(1))]);
}
BENCHMARK(BM_Predict)->ArgsProduct({{500, 1000}, {0, 1, 2, 3}})->Unit(benchmark::kMillisecond);

void BM_Generate(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bench_series(1000, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Generate)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
