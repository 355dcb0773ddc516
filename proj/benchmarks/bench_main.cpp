#include <benchmark/benchmark.h>

#include <map>

#include "clusterrep/balancing.hpp"
#include "clusterrep/simulation.hpp"
#include "clusterrep/workload.hpp"

using namespace clusterrep;

namespace {

void BM_Scenario(benchmark::State& state) {
  SimulationConfig cfg;
  cfg.topology.n_peers = static_cast<std::size_t>(state.range(0));
  cfg.workload.catalog_size = cfg.topology.n_peers;
  cfg.workload.duration_s = 12;
  const World world = build_world(cfg);
  std::uint64_t events = 0;
  for (auto _ : state) {
    Simulation sim(world, cfg);
    const MetricsReport m = sim.run();
    events += m.requests_total;
    benchmark::DoNotOptimize(m.mean_delay_ms);
  }
  state.counters["requests/s"] = benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Scenario)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_IntraBalance(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  Catalog catalog;
  for (std::uint32_t i = 0; i < 64; ++i) catalog.push_back({content_id(i), peer_id(0), 1000, {}, 0});
  std::vector<LoadReport> reports;
  std::map<PeerId, HotItemList> hot;
  Rng rng(1);
  for (std::uint32_t p = 0; p < n; ++p) {
    reports.push_back({peer_id(p), rng.uniform_index(100000), 2000 + rng.uniform_index(20000)});
    HotItemList h;
    for (std::uint32_t k = 0; k < 8; ++k) h.items.push_back(content_id(static_cast<std::uint32_t>(rng.uniform_index(64))));
    hot[peer_id(p)] = h;
  }
  const BalancingConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(intra_cluster_balance(reports, hot, catalog, cfg));
}
BENCHMARK(BM_IntraBalance)->Arg(10)->Arg(100)->Arg(1000);

void BM_ZipfSample(benchmark::State& state) {
  const ZipfSampler z(static_cast<std::size_t>(state.range(0)), 1.0);
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(z.sample(rng));
}
BENCHMARK(BM_ZipfSample)->Arg(100)->Arg(10000);

}  // namespace
BENCHMARK_MAIN();
