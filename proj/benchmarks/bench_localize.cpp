#include <benchmark/benchmark.h>

#include "twinops/faultloc.hpp"
#include "twinops/scenario.hpp"

namespace {

const twinops::Scenario& reference() {
  static const auto s = twinops::load_scenario(std::string(TWINOPS_SOURCE_DIR) + "/scenarios/reference.json");
  return s;
}

// Linear chain of n elements between two transponders, alarms on every fifth.
struct Chain {
  twinops::topology::TopologyGraph graph;
  std::vector<twinops::faultloc::Alarm> alarms;
};

Chain chain(int n) {
  using namespace twinops::topology;
  std::vector<Element> elements;
  std::vector<Edge> edges;
  std::vector<std::string> route;
  for (int i = 0; i < n; ++i) {
    const bool end = i == 0 || i == n - 1;
    Element e;
    e.kind = end ? ElementKind::OT : ElementKind::LA;
    e.id = "C" + std::to_string(i);
    e.node = "N";
    e.model = "M";
    e.shelf = "S" + std::to_string(i / 16);
    e.slot = i % 16;
    elements.push_back(e);
    if (!route.empty()) edges.push_back({route.back(), e.id});
    route.push_back(e.id);
  }
  Chain c{TopologyGraph::build(std::move(elements), std::move(edges), {{"WL", route, 100.0}}, {}), {}};
  for (int i = 0; i < n; i += 5) c.alarms.push_back({"C" + std::to_string(i), "x", twinops::faultloc::Severity::Major, 0});
  return c;
}

void BM_LocalizeReference(benchmark::State& state) {
  const auto& s = reference();
  for (auto _ : state) benchmark::DoNotOptimize(twinops::faultloc::localize(s.graph, s.alarms));
}
BENCHMARK(BM_LocalizeReference);

void BM_LocalizeChain(benchmark::State& state) {
  const auto c = chain(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(twinops::faultloc::localize(c.graph, c.alarms));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LocalizeChain)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_LocalizeMpChain(benchmark::State& state) {
  const auto c = chain(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(twinops::faultloc::localize_mp(c.graph, c.alarms));
}
BENCHMARK(BM_LocalizeMpChain)->RangeMultiplier(4)->Range(16, 1024);

}  // namespace
