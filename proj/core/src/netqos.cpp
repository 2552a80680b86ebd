#include "twinops/netqos.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>

#include "twinops/error.hpp"

namespace twinops::netqos {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Packet {
  double port_arrival_s;
  double generated_s;
  double access_delay_s;  // time spent in the access hop, one way
  std::uint32_t bytes;
  std::uint32_t flow;
};

struct Source {
  const FlowSpec* spec;
  double interval_s = 0.0;  // CBR period or AR mean gap
  double phase_s = 0.0;
  std::uint64_t generated = 0;
  double next_gen_s = kInf;
  // access hop state (AR only)
  double access_free_s = 0.0;
  double next_port_s = kInf;
  double next_access_delay_s = 0.0;
};

void validate(const LinkSpec& link, const std::vector<FlowSpec>& flows, const MeterSpec& meter,
              const SimOptions& options) {
  if (!(link.capacity_gbps > 0.0)) throw Error(Errc::InvalidConfig, "link capacity must be positive");
  if (!(link.length_km >= 0.0)) throw Error(Errc::InvalidConfig, "link length must be non-negative");
  if (!(link.per_km_delay_us >= 0.0)) throw Error(Errc::InvalidConfig, "per-km delay must be non-negative");
  if (!(options.duration_s > 0.0)) throw Error(Errc::InvalidConfig, "duration must be positive");
  if (!(options.queue_limit_bytes > 0.0)) throw Error(Errc::InvalidConfig, "queue limit must be positive");
  std::uint32_t largest_cbr = 0;
  for (const auto& f : flows) {
    if (!(f.offered_gbps >= 0.0)) throw Error(Errc::InvalidConfig, "flow '" + f.flow_id + "' has negative load");
    if (f.packet_bytes == 0) throw Error(Errc::InvalidConfig, "flow '" + f.flow_id + "' has zero packet size");
    if (f.cls == TrafficClass::CBR) largest_cbr = std::max(largest_cbr, f.packet_bytes);
  }
  if (meter.enabled) {
    if (!(meter.cbr_cap_gbps > 0.0) || meter.cbr_cap_gbps > link.capacity_gbps) {
      throw Error(Errc::InvalidConfig, "meter cap must lie in (0, link capacity]");
    }
    if (meter.burst_bytes < largest_cbr) throw Error(Errc::InvalidConfig, "meter burst smaller than a CBR packet");
  }
  if (options.wifi.enabled && (!(options.wifi.rate_gbps > 0.0) || !(options.wifi.latency_ms >= 0.0))) {
    throw Error(Errc::InvalidConfig, "access hop needs positive rate and non-negative latency");
  }
}

}  // namespace

std::string_view to_string(TrafficClass c) { return c == TrafficClass::AR ? "AR" : "CBR"; }

double QosReport::total_achieved_gbps() const {
  double total = 0.0;
  for (const auto& f : flows) total += f.achieved_gbps;
  return total;
}

double QosReport::achieved_gbps(TrafficClass cls) const {
  double total = 0.0;
  for (const auto& f : flows) {
    if (f.cls == cls) total += f.achieved_gbps;
  }
  return total;
}

double QosReport::mean_ar_rtt_ms() const {
  if (ar_rtt_ms.empty()) return 0.0;
  return std::accumulate(ar_rtt_ms.begin(), ar_rtt_ms.end(), 0.0) / static_cast<double>(ar_rtt_ms.size());
}

double propagation_delay_ms(double length_km, double per_km_delay_us) {
  if (length_km < 0.0 || per_km_delay_us < 0.0) throw Error(Errc::InvalidArgument, "negative length or delay");
  return length_km * per_km_delay_us / 1000.0;
}

bool token_bucket_conform(double packet_bytes, TokenBucket& bucket, double rate_bytes_per_s, double depth_bytes,
                          double now_s) {
  if (now_s > bucket.last_s) {
    bucket.tokens = std::min(depth_bytes, bucket.tokens + rate_bytes_per_s * (now_s - bucket.last_s));
    bucket.last_s = now_s;
  }
  if (bucket.tokens >= packet_bytes) {
    bucket.tokens -= packet_bytes;
    return true;
  }
  return false;
}

QosReport simulate(const LinkSpec& link, const std::vector<FlowSpec>& flows, const MeterSpec& meter,
                   const SimOptions& options) {
  validate(link, flows, meter, options);

  const double duration = options.duration_s;
  const double link_bps = link.capacity_gbps * 1e9;
  const double prop_s = propagation_delay_ms(link.length_km, link.per_km_delay_us) / 1000.0;
  const bool access_hop = options.wifi.enabled;
  const double access_bps = options.wifi.rate_gbps * 1e9;
  const double access_latency_s = options.wifi.latency_ms / 1000.0;

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Source> sources;
  sources.reserve(flows.size());
  for (const auto& f : flows) {
    Source s{&f};
    if (f.offered_gbps > 0.0) {
      s.interval_s = f.packet_bytes * 8.0 / (f.offered_gbps * 1e9);
      if (f.cls == TrafficClass::CBR) {
        s.phase_s = unit(rng) * s.interval_s;
        s.next_gen_s = s.phase_s;
      } else {
        s.next_gen_s = -std::log1p(-unit(rng)) * s.interval_s;
      }
    }
    sources.push_back(s);
  }

  // Advances an AR source's access hop so next_port_s reflects its next packet.
  auto stage_ar = [&](Source& s) {
    if (s.next_gen_s >= duration) {
      s.next_port_s = kInf;
      return;
    }
    if (access_hop) {
      const double start = std::max(s.next_gen_s, s.access_free_s);
      s.access_free_s = start + s.spec->packet_bytes * 8.0 / access_bps;
      s.next_port_s = s.access_free_s + access_latency_s;
      s.next_access_delay_s = s.next_port_s - s.next_gen_s;
    } else {
      s.next_port_s = s.next_gen_s;
      s.next_access_delay_s = 0.0;
    }
  };
  for (auto& s : sources) {
    if (s.spec->cls == TrafficClass::AR) {
      stage_ar(s);
    } else {
      s.next_port_s = s.next_gen_s < duration ? s.next_gen_s : kInf;
    }
  }

  QosReport report;
  report.duration_s = duration;
  for (const auto& f : flows) report.flows.push_back({f.flow_id, f.cls, f.offered_gbps});

  TokenBucket bucket{meter.burst_bytes, 0.0};
  const double meter_rate = meter.cbr_cap_gbps * 1e9 / 8.0;

  std::deque<Packet> queues[2];  // 0 = AR (high), 1 = CBR (low)
  double queued_bytes[2] = {0.0, 0.0};
  bool busy = false;
  Packet in_service{};
  double service_start = 0.0;
  double busy_until = kInf;
  std::vector<std::uint64_t> delivered_bytes(flows.size(), 0);

  auto start_next = [&](double now) {
    for (int q = 0; q < 2; ++q) {
      if (queues[q].empty()) continue;
      in_service = queues[q].front();
      queues[q].pop_front();
      queued_bytes[q] -= in_service.bytes;
      busy = true;
      service_start = now;
      busy_until = now + in_service.bytes * 8.0 / link_bps;
      return;
    }
    busy = false;
    busy_until = kInf;
  };

  for (;;) {
    std::size_t next_src = sources.size();
    double next_arrival = kInf;
    for (std::size_t i = 0; i < sources.size(); ++i) {
      if (sources[i].next_port_s < next_arrival) {
        next_arrival = sources[i].next_port_s;
        next_src = i;
      }
    }
    if (next_arrival == kInf && !busy) break;

    if (busy && busy_until <= next_arrival) {
      const double now = busy_until;
      if (now > duration) {
        break;
      }
      const double tx = now - service_start;
      report.link_busy_s += tx;
      delivered_bytes[in_service.flow] += in_service.bytes;
      auto& fr = report.flows[in_service.flow];
      ++fr.delivered_packets;
      if (fr.cls == TrafficClass::AR) {
        const double wait = service_start - in_service.port_arrival_s;
        const double one_way = wait + tx + prop_s + in_service.access_delay_s;
        report.ar_rtt_ms.push_back(2.0 * one_way * 1000.0);
      }
      start_next(now);
      continue;
    }

    Source& src = sources[next_src];
    const double now = next_arrival;
    const auto flow = static_cast<std::uint32_t>(next_src);
    const std::uint32_t bytes = src.spec->packet_bytes;
    auto& fr = report.flows[flow];
    ++fr.sent_packets;
    const int q = src.spec->cls == TrafficClass::AR ? 0 : 1;
    const Packet pkt{now, src.next_gen_s, src.next_access_delay_s, bytes, flow};

    ++src.generated;
    if (src.spec->cls == TrafficClass::CBR) {
      src.next_gen_s = src.phase_s + static_cast<double>(src.generated) * src.interval_s;
      src.next_port_s = src.next_gen_s < duration ? src.next_gen_s : kInf;
    } else {
      src.next_gen_s += -std::log1p(-unit(rng)) * src.interval_s;
      stage_ar(src);
    }

    if (q == 1 && meter.enabled && !token_bucket_conform(bytes, bucket, meter_rate, meter.burst_bytes, now)) {
      ++fr.meter_drops;
      continue;
    }
    if (queued_bytes[q] + bytes > options.queue_limit_bytes) {
      ++fr.queue_drops;
      continue;
    }
    queues[q].push_back(pkt);
    queued_bytes[q] += bytes;
    if (!busy) start_next(now);
  }

  for (std::size_t i = 0; i < flows.size(); ++i) {
    report.flows[i].achieved_gbps = static_cast<double>(delivered_bytes[i]) * 8.0 / duration / 1e9;
  }
  return report;
}

}  // namespace twinops::netqos
