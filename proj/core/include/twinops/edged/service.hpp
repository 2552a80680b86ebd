#pragma once

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "twinops/edged/collab.hpp"
#include "twinops/error.hpp"
#include "twinops/scenario.hpp"

namespace twinops::edged {

/// Receives complete JSON bodies destined for one session. Must be safe to call
/// from any thread; calls for one session are never concurrent.
using Outbox = std::function<void(std::string body)>;

/// Milliseconds on the server's monotonic clock.
using Clock = std::function<double()>;

Clock steady_clock_ms();

struct ServiceStats {
  std::uint64_t frames_in = 0;
  std::uint64_t replies_out = 0;
  std::uint64_t errors_out = 0;
  std::uint64_t events_out = 0;
};

/// Transport-independent edge service: parses request envelopes, dispatches by
/// kind to fault localization, navigation and card identification, and keeps
/// collaboration rooms in sync.
///
/// Every frame handed to handle_frame produces exactly one reply or one error
/// frame on the sender's outbox, in arrival order. Room state is serialized
/// per room, and room replies and broadcasts are emitted under the room lock so
/// each session observes room events in the order the room applied them.
class EdgeService {
 public:
  explicit EdgeService(std::shared_ptr<const Scenario> scenario, Clock clock = steady_clock_ms());
  ~EdgeService();

  EdgeService(const EdgeService&) = delete;
  EdgeService& operator=(const EdgeService&) = delete;

  /// Registers a session; `preferred_id` is used when non-empty and unused.
  SessionId open_session(Outbox outbox, std::string preferred_id = {});
  /// Leaves any room and forgets the session.
  void close_session(const SessionId& id);

  void handle_frame(const SessionId& session, std::string_view body);

  /// Reply for a frame the transport could not deliver as a body (oversized).
  void reject_frame(const SessionId& session, std::string_view reason);

  ServiceStats stats() const;
  std::size_t session_count() const;
  const Scenario& scenario() const { return *scenario_; }

  /// Authoritative room state, for inspection.
  std::optional<RoomSnapshot> room_snapshot(const std::string& room) const;

 private:
  struct Session;
  struct Room;
  struct Request;

  std::shared_ptr<const Scenario> scenario_;
  Clock clock_;
  std::optional<navmap::Grid2D> grid_;
  cardid::SyntheticDetector detector_;

  mutable std::mutex sessions_mu_;
  std::map<SessionId, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_session_ = 1;

  mutable std::mutex rooms_mu_;
  std::map<std::string, std::shared_ptr<Room>> rooms_;

  std::atomic<std::uint64_t> frames_in_{0};
  std::atomic<std::uint64_t> replies_out_{0};
  std::atomic<std::uint64_t> errors_out_{0};
  std::atomic<std::uint64_t> events_out_{0};

  std::shared_ptr<Session> find_session(const SessionId& id) const;
  std::shared_ptr<Room> room(const std::string& id, bool create);

  void send_reply(Session& s, const Request& req, Json payload);
  void send_error(Session& s, std::optional<std::int64_t> msg_id, double recv_ts, Errc code, std::string_view message);
  void send_event(const SessionId& to, std::string_view event, Json payload);

  void dispatch(Session& s, Request& req);
  Json do_hello(Session& s, const Json& payload);
  Json do_alarm_batch(Session& s, const Json& payload);
  Json do_localize(Session& s, const Json& payload);
  Json do_nav(const Json& payload);
  Json do_card_id(Session& s, const Json& payload);
  void do_collab_join(Session& s, Request& req);
  void do_pose_update(Session& s, Request& req);
  void do_stroke_add(Session& s, Request& req);
  void do_chat_text(Session& s, Request& req);
};

}  // namespace twinops::edged
