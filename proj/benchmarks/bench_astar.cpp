#include <benchmark/benchmark.h>

#include <random>

#include "twinops/navmap.hpp"
#include "twinops/scenario.hpp"

using namespace twinops::navmap;

namespace {

Grid2D random_grid(int n, double p, std::uint64_t seed) {
  Grid2D g(1.0, n, n);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution blocked(p);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      if (blocked(rng)) g.set_blocked({x, y});
    }
  }
  g.set_blocked({0, 0}, false);
  g.set_blocked({n - 1, n - 1}, false);
  return g;
}

void BM_AstarOpen(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid2D g(1.0, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(astar(g, {0, 0}, {n - 1, n - 1}));
}
BENCHMARK(BM_AstarOpen)->Arg(32)->Arg(128)->Arg(512);

void BM_AstarCluttered(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid2D g = random_grid(n, 0.25, 5);
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(astar(g, {0, 0}, {n - 1, n - 1}));
    } catch (const std::exception&) {
    }
  }
}
BENCHMARK(BM_AstarCluttered)->Arg(32)->Arg(128)->Arg(512);

void BM_ReferenceLabRoute(benchmark::State& state) {
  static const auto s = twinops::load_scenario(std::string(TWINOPS_SOURCE_DIR) + "/scenarios/reference.json");
  const auto grid = s.nav_grid();
  const auto from = grid.cell_at(s.point("P1"));
  const auto to = grid.cell_at(s.point("P4"));
  for (auto _ : state) benchmark::DoNotOptimize(plan_route(grid, from, to, 1));
}
BENCHMARK(BM_ReferenceLabRoute);

void BM_Project2d(benchmark::State& state) {
  static const auto s = twinops::load_scenario(std::string(TWINOPS_SOURCE_DIR) + "/scenarios/reference.json");
  for (auto _ : state) benchmark::DoNotOptimize(project_2d(*s.envmap, 0.1, 1.8));
}
BENCHMARK(BM_Project2d);

}  // namespace
