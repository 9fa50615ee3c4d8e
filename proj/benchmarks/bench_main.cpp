#include <benchmark/benchmark.h>

#include <map>

#include "asim/growth.hpp"
#include "asim/policy.hpp"
#include "asim/traffic.hpp"
#include "asim/wickedness.hpp"

namespace {

// Grown networks are cached per size; growing dominates setup time.
const asim::NetworkState& grown(std::size_t n) {
  static std::map<std::size_t, asim::NetworkState> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    asim::NetworkState state(asim::build_grid(32, 32, -1.0, 1'000'000, 1),
                             asim::ModelParams{}, 7);
    asim::grow_to(state, n);
    it = cache.emplace(n, std::move(state)).first;
  }
  return it->second;
}

void BM_ComputeTraffic(benchmark::State& bs) {
  const auto& state = grown(static_cast<std::size_t>(bs.range(0)));
  asim::TrafficOptions options;
  options.tie_seed = 11;
  options.workers = 1;
  for (auto _ : bs) {
    auto report = asim::compute_traffic(state, asim::PolicyAssignment{}, options);
    benchmark::DoNotOptimize(report.total_emitted);
  }
  bs.SetItemsProcessed(bs.iterations() * bs.range(0));
}
BENCHMARK(BM_ComputeTraffic)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_ComputeTrafficBlacklist(benchmark::State& bs) {
  const auto& state = grown(static_cast<std::size_t>(bs.range(0)));
  asim::PolicySpec spec;
  spec.kind = asim::PolicyKind::blacklist;
  spec.blacklist_threshold = 0.08;
  spec.size_cap = 170;
  const auto top = asim::top_k_by_degree(state, 20);
  const auto policy = asim::make_assignment(top, spec);
  asim::TrafficOptions options;
  options.tie_seed = 11;
  options.workers = 1;
  for (auto _ : bs) {
    auto report = asim::compute_traffic(state, policy, options);
    benchmark::DoNotOptimize(report.total_emitted);
  }
}
BENCHMARK(BM_ComputeTrafficBlacklist)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_ShortestPath(benchmark::State& bs) {
  const auto& state = grown(2000);
  asim::AgentId dst = 0;
  for (auto _ : bs) {
    dst = (dst + 97) % 2000;
    benchmark::DoNotOptimize(asim::shortest_path(state, 1, dst, 5));
  }
}
BENCHMARK(BM_ShortestPath);

void BM_GrowTo(benchmark::State& bs) {
  const auto grid = asim::build_grid(32, 32, -1.0, 1'000'000, 1);
  for (auto _ : bs) {
    asim::NetworkState state(grid, asim::ModelParams{}, 3);
    asim::grow_to(state, static_cast<std::size_t>(bs.range(0)));
    benchmark::DoNotOptimize(state.link_count());
  }
}
BENCHMARK(BM_GrowTo)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_DrawWickedness(benchmark::State& bs) {
  asim::Rng rng(5);
  for (auto _ : bs) benchmark::DoNotOptimize(asim::draw_wickedness(0.1, rng));
}
BENCHMARK(BM_DrawWickedness);

}  // namespace

BENCHMARK_MAIN();
