#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <vector>

#include "tourcp/circuit.hpp"
#include "tourcp/geometry.hpp"
#include "tourcp/graphalg.hpp"
#include "tourcp/halfcheck.hpp"
#include "tourcp/harness.hpp"
#include "tourcp/search.hpp"
#include "tourcp/tsplib.hpp"

namespace {

using namespace tourcp;

std::shared_ptr<const TspInstance> berlin52() {
  static const auto inst = std::make_shared<const TspInstance>(
      load_instance(std::string(TOURCP_DATA_DIR) + "/berlin52.tsp"));
  return inst;
}

std::vector<Segment> berlin52_segments() {
  const auto inst = berlin52();
  std::vector<Segment> segments;
  int id = 0;
  for (int i = 0; i < inst->n; ++i)
    for (int j = i + 1; j < inst->n; ++j)
      segments.push_back(Segment{inst->coords[static_cast<std::size_t>(i)],
                                 inst->coords[static_cast<std::size_t>(j)], id++});
  return segments;
}

void BM_SegmentsCross(benchmark::State& state) {
  const Segment a{{0, 0}, {10, 10}, 0};
  const Segment b{{0, 10}, {10, 0}, 1};
  for (auto _ : state) benchmark::DoNotOptimize(segments_cross(a, b));
}
BENCHMARK(BM_SegmentsCross);

void BM_SegmentIndexBuild(benchmark::State& state) {
  const auto segments = berlin52_segments();
  for (auto _ : state) {
    SegmentIndex index = SegmentIndex::build(segments);
    benchmark::DoNotOptimize(index.size());
  }
}
BENCHMARK(BM_SegmentIndexBuild)->Unit(benchmark::kMillisecond);

void BM_SegmentIndexQueryAll(benchmark::State& state) {
  const auto segments = berlin52_segments();
  const SegmentIndex index = SegmentIndex::build(segments);
  for (auto _ : state) {
    std::size_t hits = 0;
    for (const Segment& s : segments) hits += index.query_crossing(s).size();
    benchmark::DoNotOptimize(hits);
  }
}
BENCHMARK(BM_SegmentIndexQueryAll)->Unit(benchmark::kMillisecond);

void BM_CrossTableBuild(benchmark::State& state) {
  const auto inst = berlin52();
  for (auto _ : state) {
    const CrossTable table = CrossTable::build(*inst);
    benchmark::DoNotOptimize(table.total_entries());
  }
}
BENCHMARK(BM_CrossTableBuild)->Unit(benchmark::kMillisecond);

void BM_RootFixpointStandard(benchmark::State& state) {
  const auto inst = berlin52();
  CircuitModel model(inst);
  auto props = model.standard_propagators();
  const Store root = model.root_store();
  for (auto _ : state) {
    Store store = root;
    benchmark::DoNotOptimize(propagate_fixpoint(props, store));
  }
}
BENCHMARK(BM_RootFixpointStandard)->Unit(benchmark::kMicrosecond);

void BM_TourConstructionBound(benchmark::State& state) {
  const auto inst = berlin52();
  CircuitModel model(inst);
  CbpPropagator cbp(inst);
  const Store root = model.root_store();
  for (auto _ : state) {
    Store store = root;
    benchmark::DoNotOptimize(cbp.propagate(store));
  }
}
BENCHMARK(BM_TourConstructionBound)->Unit(benchmark::kMicrosecond);

void BM_HubTreeBound(benchmark::State& state) {
  const auto inst = berlin52();
  CircuitModel model(inst);
  HubTreePropagator onetree(inst, 1);
  const Store root = model.root_store();
  for (auto _ : state) {
    Store store = root;
    benchmark::DoNotOptimize(onetree.propagate(store));
  }
}
BENCHMARK(BM_HubTreeBound)->Unit(benchmark::kMicrosecond);

void BM_KruskalFullGraph(benchmark::State& state) {
  const auto inst = berlin52();
  for (auto _ : state) {
    auto tree = kruskal_with_fixed(inst->n, inst->edges_by_weight, {});
    benchmark::DoNotOptimize(tree->weight);
  }
}
BENCHMARK(BM_KruskalFullGraph)->Unit(benchmark::kMicrosecond);

void BM_LubyPrefix(benchmark::State& state) {
  for (auto _ : state) {
    std::uint64_t sum = 0;
    for (std::uint64_t i = 1; i <= 512; ++i) sum += luby(i);
    benchmark::DoNotOptimize(sum);
  }
}
BENCHMARK(BM_LubyPrefix);

void BM_SolveNineCities(benchmark::State& state) {
  std::mt19937_64 rng(12);
  const auto inst = std::make_shared<const TspInstance>(random_euclidean_instance(9, rng));
  for (auto _ : state) {
    SolveConfig config;
    config.epsilon = 0.0;
    const RunReport report = solve_instance(inst, config);
    benchmark::DoNotOptimize(report.outcome.proven_optimal);
  }
}
BENCHMARK(BM_SolveNineCities)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
