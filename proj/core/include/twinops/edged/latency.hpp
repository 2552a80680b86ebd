#pragma once

#include <cstdint>
#include <mutex>
#include <vector>

#include "twinops/histogram.hpp"

namespace twinops::edged {

/// Round-trip decomposition for one request. Client and server clocks are
/// never compared: inference uses server timestamps only, total uses client
/// timestamps only, and the network share is their difference.
struct LatencyRecord {
  std::int64_t msg_id = 0;
  double inference_ms = 0.0;
  double network_rtt_ms = 0.0;
  double total_ms = 0.0;
};

struct RequestTimestamps {
  double client_send_ms = 0.0;
  double client_recv_ms = 0.0;
  double server_recv_ms = 0.0;
  double server_send_ms = 0.0;
};

/// Throws NonMonotoneTimestamps when either clock runs backwards or the server
/// span exceeds the client span.
LatencyRecord account_latency(std::int64_t msg_id, const RequestTimestamps& ts);

/// Thread-safe collection of latency records with histogram views.
class LatencyLog {
 public:
  void add(const LatencyRecord& record);
  std::vector<LatencyRecord> records() const;
  std::size_t size() const;

  Histogram inference_histogram(double bin_width_ms) const;
  Histogram network_histogram(double bin_width_ms) const;
  Histogram total_histogram(double bin_width_ms) const;

 private:
  mutable std::mutex mu_;
  std::vector<LatencyRecord> records_;
};

}  // namespace twinops::edged
