#include "twinops/edged/latency.hpp"

#include "twinops/error.hpp"

namespace twinops::edged {

LatencyRecord account_latency(std::int64_t msg_id, const RequestTimestamps& ts) {
  const double total = ts.client_recv_ms - ts.client_send_ms;
  const double inference = ts.server_send_ms - ts.server_recv_ms;
  if (total < 0.0) throw Error(Errc::NonMonotoneTimestamps, "client receive precedes client send");
  if (inference < 0.0) throw Error(Errc::NonMonotoneTimestamps, "server send precedes server receive");
  if (inference > total) throw Error(Errc::NonMonotoneTimestamps, "server processing exceeds the client round trip");
  return {msg_id, inference, total - inference, total};
}

void LatencyLog::add(const LatencyRecord& record) {
  std::lock_guard lock(mu_);
  records_.push_back(record);
}

std::vector<LatencyRecord> LatencyLog::records() const {
  std::lock_guard lock(mu_);
  return records_;
}

std::size_t LatencyLog::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

Histogram LatencyLog::inference_histogram(double bin_width_ms) const {
  Histogram h(bin_width_ms);
  for (const auto& r : records()) h.add(r.inference_ms);
  return h;
}

Histogram LatencyLog::network_histogram(double bin_width_ms) const {
  Histogram h(bin_width_ms);
  for (const auto& r : records()) h.add(r.network_rtt_ms);
  return h;
}

Histogram LatencyLog::total_histogram(double bin_width_ms) const {
  Histogram h(bin_width_ms);
  for (const auto& r : records()) h.add(r.total_ms);
  return h;
}

}  // namespace twinops::edged
