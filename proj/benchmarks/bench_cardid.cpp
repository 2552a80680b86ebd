#include <benchmark/benchmark.h>

#include "twinops/cardid.hpp"

using namespace twinops;

namespace {

cardid::SyntheticLayout layout(int shelves, int slots) {
  cardid::SyntheticLayout l;
  l.id = "bench";
  l.slots_per_shelf = slots;
  for (int s = 0; s < shelves; ++s) {
    topology::ShelfArrangement a;
    a.shelf_id = "S" + std::to_string(s);
    for (int k = 0; k < slots; ++k) {
      a.slots.push_back({k, a.shelf_id + "/" + std::to_string(k), "M" + std::to_string((k * 7 + s) % 5)});
    }
    l.shelves.push_back(a);
  }
  return l;
}

void BM_MatchSlots(benchmark::State& state) {
  const auto l = layout(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  cardid::SyntheticDetector d;
  d.add_layout(l);
  const auto dets = d.detect({"bench", 1});
  for (auto _ : state) benchmark::DoNotOptimize(cardid::match_slots(dets, l.shelves));
}
BENCHMARK(BM_MatchSlots)->Args({1, 8})->Args({2, 16})->Args({4, 32});

void BM_SyntheticDetect(benchmark::State& state) {
  auto l = layout(4, 32);
  l.jitter_sigma = 0.01;
  cardid::SyntheticDetector d;
  d.add_layout(l);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(d.detect({"bench", seed++}));
}
BENCHMARK(BM_SyntheticDetect);

}  // namespace
