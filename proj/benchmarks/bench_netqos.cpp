#include <benchmark/benchmark.h>

#include "twinops/netqos.hpp"

using namespace twinops::netqos;

namespace {

void BM_SimulateReferenceLoad(benchmark::State& state) {
  const std::vector<FlowSpec> flows{{"ar", TrafficClass::AR, 0.33, 1500}, {"cbr", TrafficClass::CBR, 100.0, 1500}};
  SimOptions opt;
  opt.duration_s = 0.01;
  const MeterSpec meter{state.range(0) != 0, 90.0, 15000.0};
  std::uint64_t packets = 0;
  for (auto _ : state) {
    const auto r = simulate({100.0, 86.0, 5.0}, flows, meter, opt);
    for (const auto& f : r.flows) packets += f.sent_packets;
  }
  state.counters["packets/s"] = benchmark::Counter(static_cast<double>(packets), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SimulateReferenceLoad)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_TokenBucket(benchmark::State& state) {
  TokenBucket b{15000.0, 0.0};
  double t = 0.0;
  for (auto _ : state) {
    t += 1.2e-7;
    benchmark::DoNotOptimize(token_bucket_conform(1500, b, 90e9 / 8, 15000.0, t));
  }
}
BENCHMARK(BM_TokenBucket);

}  // namespace
