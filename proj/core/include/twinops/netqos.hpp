#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace twinops::netqos {

struct LinkSpec {
  double capacity_gbps = 100.0;
  double length_km = 0.0;
  double per_km_delay_us = 5.0;
};

enum class TrafficClass { AR, CBR };

std::string_view to_string(TrafficClass c);

struct FlowSpec {
  std::string flow_id;
  TrafficClass cls = TrafficClass::AR;
  double offered_gbps = 0.0;
  std::uint32_t packet_bytes = 1500;
};

struct MeterSpec {
  bool enabled = true;
  double cbr_cap_gbps = 90.0;
  double burst_bytes = 15000.0;
};

/// Optional fixed-rate, fixed-latency access hop in front of the shared link,
/// applied to AR traffic in each direction.
struct WifiStage {
  bool enabled = false;
  double rate_gbps = 2.5;
  double latency_ms = 2.0;
};

struct SimOptions {
  double duration_s = 1.0;
  std::uint64_t seed = 1;
  /// Drop-tail limit per class queue.
  double queue_limit_bytes = 4.0 * 1024 * 1024;
  WifiStage wifi;
};

struct FlowReport {
  std::string flow_id;
  TrafficClass cls = TrafficClass::AR;
  double offered_gbps = 0.0;
  double achieved_gbps = 0.0;
  std::uint64_t sent_packets = 0;
  std::uint64_t delivered_packets = 0;
  std::uint64_t meter_drops = 0;
  std::uint64_t queue_drops = 0;

  bool operator==(const FlowReport&) const = default;
};

struct QosReport {
  std::vector<FlowReport> flows;
  /// Per-packet AR round trip: 2 * (queueing + transmission + propagation), plus the access hop when enabled.
  std::vector<double> ar_rtt_ms;
  double link_busy_s = 0.0;
  double duration_s = 0.0;

  double total_achieved_gbps() const;
  double achieved_gbps(TrafficClass cls) const;
  double mean_ar_rtt_ms() const;

  bool operator==(const QosReport&) const = default;
};

/// One-way fibre delay: length_km * per_km_delay_us / 1000.
double propagation_delay_ms(double length_km, double per_km_delay_us);

/// Byte-counting token bucket.
struct TokenBucket {
  double tokens = 0.0;
  double last_s = 0.0;
};

/// Refills at `rate_bytes_per_s` (capped at `depth_bytes`) up to `now_s`,
/// then admits the packet iff enough tokens remain, consuming them.
bool token_bucket_conform(double packet_bytes, TokenBucket& bucket, double rate_bytes_per_s, double depth_bytes,
                          double now_s);

/// Event-driven packet simulation of the shared path: CBR through the meter
/// (when enabled), then a strict-priority, non-preemptive output port serving
/// AR before CBR. Throws InvalidConfig.
QosReport simulate(const LinkSpec& link, const std::vector<FlowSpec>& flows, const MeterSpec& meter,
                   const SimOptions& options);

}  // namespace twinops::netqos
