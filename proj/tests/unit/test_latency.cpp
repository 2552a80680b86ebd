#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "expect_errc.hpp"
#include "twinops/edged/latency.hpp"

using namespace twinops;
using namespace twinops::edged;

TEST(AccountLatency, Decomposition) {
  const auto r = account_latency(7, {100.0, 112.5, 5000.0, 5004.0});
  EXPECT_EQ(r.msg_id, 7);
  EXPECT_DOUBLE_EQ(r.total_ms, 12.5);
  EXPECT_DOUBLE_EQ(r.inference_ms, 4.0);
  EXPECT_DOUBLE_EQ(r.network_rtt_ms, 8.5);
}

TEST(AccountLatency, ConservationUnderArbitraryClockOffsets) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (int i = 0; i < 10000; ++i) {
    const double offset = std::uniform_real_distribution<double>(-1e9, 1e9)(rng);
    const double send = u(rng);
    const double up = u(rng);
    const double infer = u(rng);
    const double down = u(rng);
    const RequestTimestamps ts{send, send + up + infer + down, send + up + offset, send + up + infer + offset};
    const auto r = account_latency(i, ts);
    EXPECT_NEAR(r.inference_ms + r.network_rtt_ms, r.total_ms, 1e-6);
    EXPECT_NEAR(r.inference_ms, infer, 1e-6);
    EXPECT_GE(r.network_rtt_ms, -1e-6);
  }
}

TEST(AccountLatency, RejectsNonMonotone) {
  EXPECT_ERRC(account_latency(1, {10.0, 5.0, 0.0, 1.0}), Errc::NonMonotoneTimestamps);
  EXPECT_ERRC(account_latency(1, {0.0, 5.0, 3.0, 1.0}), Errc::NonMonotoneTimestamps);
  EXPECT_ERRC(account_latency(1, {0.0, 5.0, 0.0, 6.0}), Errc::NonMonotoneTimestamps);
}

TEST(LatencyLog, ConcurrentAddsAndHistogramTotals) {
  LatencyLog log;
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 250; ++i) log.add({t * 1000 + i, 0.1 * i, 0.2, 0.1 * i + 0.2});
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(log.size(), 1000u);
  EXPECT_EQ(log.inference_histogram(0.5).total(), 1000u);
  EXPECT_EQ(log.network_histogram(0.5).total(), 1000u);
  EXPECT_EQ(log.total_histogram(0.5).total(), 1000u);
  EXPECT_EQ(log.network_histogram(0.5).bins().size(), 1u);
}
