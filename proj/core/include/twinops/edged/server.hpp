#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>

#include "twinops/edged/frame.hpp"
#include "twinops/edged/latency.hpp"
#include "twinops/edged/service.hpp"

namespace twinops::edged {

struct ListenAddress {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
};

/// "host:port" or ":port". Throws InvalidArgument.
ListenAddress parse_listen_address(std::string_view text);

struct ServerConfig {
  ListenAddress stream{"127.0.0.1", 7070};
  /// Browser endpoint carrying the same JSON bodies as WebSocket text messages.
  std::optional<ListenAddress> websocket;
  std::uint32_t max_frame_bytes = kDefaultMaxFrameBytes;
};

/// Network front end for an EdgeService: a length-prefixed stream listener
/// (one reader thread per connection) and an optional WebSocket listener.
class EdgeServer {
 public:
  /// Binds both listeners and starts serving. Throws BindFailure.
  EdgeServer(std::shared_ptr<EdgeService> service, ServerConfig config);
  ~EdgeServer();

  EdgeServer(const EdgeServer&) = delete;
  EdgeServer& operator=(const EdgeServer&) = delete;

  std::uint16_t port() const;
  std::optional<std::uint16_t> websocket_port() const;
  EdgeService& service() { return *service_; }

  void stop();
  /// Blocks until stop() is called from another thread.
  void wait();

 private:
  struct Impl;
  std::shared_ptr<EdgeService> service_;
  std::unique_ptr<Impl> impl_;
};

/// Blocking stream-protocol client used by the CLI probe and tests. Not
/// thread-safe.
class EdgeClient {
 public:
  EdgeClient(const std::string& host, std::uint16_t port);
  ~EdgeClient();

  EdgeClient(const EdgeClient&) = delete;
  EdgeClient& operator=(const EdgeClient&) = delete;

  /// Sends a request and waits for its reply or error frame. Events arriving
  /// meanwhile are queued. The latency record of the exchange is stored in
  /// last_latency(). Throws MalformedFrame when the server rejects the
  /// envelope unread; replies to earlier send_raw frames must be read first.
  Json request(const std::string& kind, const Json& payload = Json::object());

  /// Writes raw bytes (for robustness tests).
  void send_raw(std::string_view bytes);
  /// Reads the next frame of any kind.
  Json read_frame();
  std::deque<Json>& events() { return events_; }

  const LatencyRecord& last_latency() const { return last_latency_; }
  std::int64_t next_msg_id() const { return next_msg_id_; }
  void set_next_msg_id(std::int64_t id) { next_msg_id_ = id; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::deque<Json> events_;
  std::int64_t next_msg_id_ = 1;
  LatencyRecord last_latency_;
  Clock clock_ = steady_clock_ms();
};

}  // namespace twinops::edged
