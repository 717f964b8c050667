// Serial reference kernels against their OpenMP counterparts.

#include "circtrade/cluster.hpp"
#include "circtrade/embedder.hpp"
#include "circtrade/graph.hpp"
#include "circtrade/synth.hpp"
#include "circtrade/walker.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

namespace ct = circtrade;

namespace {

const ct::WeightedGraph& scenario_graph() {
  static const ct::WeightedGraph g = [] {
    const auto sc = ct::generate_scenario(ct::ScenarioConfig{});
    return ct::project_to_weighted(ct::build_sales_flow_graph(sc.table.registry, sc.table.transactions),
                                   ct::WeightScale::log1p);
  }();
  return g;
}

const ct::WalkCorpus& scenario_walks() {
  static const ct::WalkCorpus corpus = [] {
    ct::WalkConfig cfg;
    cfg.walk_length = 40;
    cfg.walks_per_node = 4;
    return ct::generate_walks(scenario_graph(), cfg);
  }();
  return corpus;
}

ct::DenseMatrix random_points(std::size_t n, std::size_t d) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  ct::DenseMatrix m(n, d);
  for (double& v : m.values()) v = g(rng);
  return m;
}

void threads_arg(benchmark::State& state) { omp_set_num_threads(static_cast<int>(state.range(0))); }

void BM_WalksSerial(benchmark::State& state) {
  ct::WalkConfig cfg;
  cfg.walks_per_node = 2;
  for (auto _ : state) benchmark::DoNotOptimize(ct::generate_walks_serial(scenario_graph(), cfg));
}

void BM_WalksParallel(benchmark::State& state) {
  threads_arg(state);
  ct::WalkConfig cfg;
  cfg.walks_per_node = 2;
  for (auto _ : state) benchmark::DoNotOptimize(ct::generate_walks(scenario_graph(), cfg));
}

void BM_DbscanSerial(benchmark::State& state) {
  const auto m = random_points(static_cast<std::size_t>(state.range(0)), 22);
  for (auto _ : state) benchmark::DoNotOptimize(ct::dbscan_serial(m, {0.5, 5}));
}

void BM_DbscanParallel(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(1)));
  const auto m = random_points(static_cast<std::size_t>(state.range(0)), 22);
  for (auto _ : state) benchmark::DoNotOptimize(ct::dbscan(m, {0.5, 5}));
}

void BM_TrainDeterministic(benchmark::State& state) {
  ct::EmbedConfig cfg;
  cfg.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(ct::train(scenario_walks(), scenario_graph().node_count(), cfg));
}

void BM_TrainHogwild(benchmark::State& state) {
  ct::EmbedConfig cfg;
  cfg.epochs = 1;
  cfg.deterministic = false;
  cfg.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ct::train(scenario_walks(), scenario_graph().node_count(), cfg));
}

}  // namespace

BENCHMARK(BM_WalksSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WalksParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DbscanSerial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DbscanParallel)->Args({500, 1})->Args({2000, 1})->Args({2000, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainDeterministic)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainHogwild)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
