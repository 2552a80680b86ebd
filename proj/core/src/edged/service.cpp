#include "twinops/edged/service.hpp"

#include <chrono>

#include "twinops/error.hpp"
#include "twinops/twin.hpp"

namespace twinops::edged {

namespace {

constexpr std::string_view kArCapability = "ar";

Json object_or_empty(const Json& j, const char* key) {
  if (!j.contains(key)) return Json::object();
  const Json& v = j.at(key);
  if (v.is_null()) return Json::object();
  if (!v.is_object()) throw Error(Errc::MalformedFrame, std::string("'") + key + "' must be an object");
  return v;
}

// Error messages may quote raw client bytes, so invalid UTF-8 is replaced rather than thrown.
std::string encode(const Json& j) { return j.dump(-1, ' ', false, Json::error_handler_t::replace); }

}  // namespace

Clock steady_clock_ms() {
  const auto origin = std::chrono::steady_clock::now();
  return [origin] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - origin).count();
  };
}

struct EdgeService::Session {
  SessionId id;
  Outbox outbox;
  std::mutex frame_mu;  // one frame at a time, in arrival order
  std::mutex send_mu;   // replies and broadcasts interleave safely
  std::optional<std::int64_t> last_msg_id;
  std::set<std::string> capabilities;
  std::vector<faultloc::Alarm> alarms;
  std::string room;

  void send(std::string body) {
    std::lock_guard lock(send_mu);
    outbox(std::move(body));
  }
};

struct EdgeService::Room {
  std::mutex mu;
  CollabRoom state;
  explicit Room(std::string id) : state(std::move(id)) {}
};

struct EdgeService::Request {
  std::int64_t msg_id = 0;
  std::string kind;
  Json payload;
  double recv_ts = 0.0;
  bool replied = false;
};

EdgeService::EdgeService(std::shared_ptr<const Scenario> scenario, Clock clock)
    : scenario_(std::move(scenario)), clock_(std::move(clock)) {
  if (!scenario_) throw Error(Errc::InvalidArgument, "edge service needs a scenario");
  if (scenario_->envmap) grid_ = scenario_->nav_grid();
  detector_ = scenario_->make_detector();
}

EdgeService::~EdgeService() = default;

SessionId EdgeService::open_session(Outbox outbox, std::string preferred_id) {
  auto s = std::make_shared<Session>();
  s->outbox = std::move(outbox);
  std::lock_guard lock(sessions_mu_);
  if (preferred_id.empty() || sessions_.count(preferred_id)) {
    do {
      preferred_id = "s" + std::to_string(next_session_++);
    } while (sessions_.count(preferred_id));
  }
  s->id = preferred_id;
  sessions_.emplace(s->id, s);
  return s->id;
}

void EdgeService::close_session(const SessionId& id) {
  std::shared_ptr<Session> s;
  {
    std::lock_guard lock(sessions_mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return;
    s = it->second;
    sessions_.erase(it);
  }
  std::string room_id;
  {
    std::lock_guard lock(s->frame_mu);
    room_id = s->room;
  }
  if (!room_id.empty()) {
    if (auto r = room(room_id, false)) {
      std::lock_guard lock(r->mu);
      r->state.leave(id);
    }
  }
}

std::shared_ptr<EdgeService::Session> EdgeService::find_session(const SessionId& id) const {
  std::lock_guard lock(sessions_mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::shared_ptr<EdgeService::Room> EdgeService::room(const std::string& id, bool create) {
  std::lock_guard lock(rooms_mu_);
  auto it = rooms_.find(id);
  if (it != rooms_.end()) return it->second;
  if (!create) return nullptr;
  return rooms_.emplace(id, std::make_shared<Room>(id)).first->second;
}

ServiceStats EdgeService::stats() const {
  return {frames_in_.load(), replies_out_.load(), errors_out_.load(), events_out_.load()};
}

std::size_t EdgeService::session_count() const {
  std::lock_guard lock(sessions_mu_);
  return sessions_.size();
}

std::optional<RoomSnapshot> EdgeService::room_snapshot(const std::string& id) const {
  std::shared_ptr<Room> r;
  {
    std::lock_guard lock(rooms_mu_);
    auto it = rooms_.find(id);
    if (it == rooms_.end()) return std::nullopt;
    r = it->second;
  }
  std::lock_guard lock(r->mu);
  return r->state.snapshot();
}

void EdgeService::send_reply(Session& s, const Request& req, Json payload) {
  std::string kind = req.kind == "ping" ? "pong" : req.kind + "_response";
  Json out{{"msg_id", req.msg_id},
           {"session_id", s.id},
           {"kind", std::move(kind)},
           {"ok", true},
           {"payload", std::move(payload)},
           {"server_recv_ts_ms", req.recv_ts},
           {"server_send_ts_ms", clock_()}};
  ++replies_out_;
  s.send(encode(out));
}

void EdgeService::send_error(Session& s, std::optional<std::int64_t> msg_id, double recv_ts, Errc code,
                             std::string_view message) {
  Json out{{"msg_id", msg_id ? Json(*msg_id) : Json(nullptr)},
           {"session_id", s.id},
           {"kind", "error"},
           {"ok", false},
           {"error", {{"code", to_string(code)}, {"message", message}}},
           {"server_recv_ts_ms", recv_ts},
           {"server_send_ts_ms", clock_()}};
  ++errors_out_;
  s.send(encode(out));
}

void EdgeService::send_event(const SessionId& to, std::string_view event, Json payload) {
  auto target = find_session(to);
  if (!target) return;
  Json out{{"kind", "event"}, {"event", event}, {"payload", std::move(payload)}, {"server_send_ts_ms", clock_()}};
  ++events_out_;
  target->send(encode(out));
}

void EdgeService::reject_frame(const SessionId& session, std::string_view reason) {
  auto s = find_session(session);
  if (!s) return;
  ++frames_in_;
  std::lock_guard lock(s->frame_mu);
  send_error(*s, std::nullopt, clock_(), Errc::MalformedFrame, reason);
}

void EdgeService::handle_frame(const SessionId& session, std::string_view body) {
  const double recv_ts = clock_();
  auto s = find_session(session);
  if (!s) return;
  ++frames_in_;
  std::lock_guard lock(s->frame_mu);

  Json doc;
  try {
    doc = Json::parse(body);
  } catch (const Json::exception& e) {
    send_error(*s, std::nullopt, recv_ts, Errc::MalformedFrame, e.what());
    return;
  }

  std::optional<std::int64_t> msg_id;
  if (doc.is_object() && doc.contains("msg_id") && doc.at("msg_id").is_number_integer()) {
    msg_id = doc.at("msg_id").get<std::int64_t>();
  }
  if (!doc.is_object() || !msg_id || !doc.contains("kind") || !doc.at("kind").is_string()) {
    send_error(*s, msg_id, recv_ts, Errc::MalformedFrame, "envelope needs an integer msg_id and a string kind");
    return;
  }
  if (s->last_msg_id && *msg_id <= *s->last_msg_id) {
    send_error(*s, msg_id, recv_ts, Errc::NonMonotoneMsgId,
               "msg_id " + std::to_string(*msg_id) + " does not exceed " + std::to_string(*s->last_msg_id));
    return;
  }
  s->last_msg_id = msg_id;

  Request req;
  req.msg_id = *msg_id;
  req.kind = doc.at("kind").get<std::string>();
  req.recv_ts = recv_ts;
  try {
    req.payload = object_or_empty(doc, "payload");
    dispatch(*s, req);
  } catch (const Error& e) {
    if (!req.replied) send_error(*s, msg_id, recv_ts, e.code(), e.what());
  } catch (const Json::exception& e) {
    if (!req.replied) send_error(*s, msg_id, recv_ts, Errc::MalformedFrame, e.what());
  } catch (const std::exception& e) {
    if (!req.replied) send_error(*s, msg_id, recv_ts, Errc::InvalidArgument, e.what());
  }
}

void EdgeService::dispatch(Session& s, Request& req) {
  const std::string& kind = req.kind;
  if (kind == "ping") {
    send_reply(s, req, req.payload);
  } else if (kind == "hello") {
    send_reply(s, req, do_hello(s, req.payload));
  } else if (kind == "alarm_batch") {
    send_reply(s, req, do_alarm_batch(s, req.payload));
  } else if (kind == "localize_request") {
    send_reply(s, req, do_localize(s, req.payload));
  } else if (kind == "nav_request") {
    send_reply(s, req, do_nav(req.payload));
  } else if (kind == "card_id_request") {
    send_reply(s, req, do_card_id(s, req.payload));
  } else if (kind == "collab_join") {
    do_collab_join(s, req);
  } else if (kind == "pose_update") {
    do_pose_update(s, req);
  } else if (kind == "stroke_add") {
    do_stroke_add(s, req);
  } else if (kind == "chat_text") {
    do_chat_text(s, req);
  } else {
    throw Error(Errc::UnknownKind, "'" + kind + "'");
  }
  req.replied = true;
}

Json EdgeService::do_hello(Session& s, const Json& payload) {
  if (payload.contains("capabilities")) {
    s.capabilities.clear();
    for (const auto& c : payload.at("capabilities")) s.capabilities.insert(c.get<std::string>());
  }
  return {{"session_id", s.id},
          {"capabilities", s.capabilities},
          {"scenario", scenario_->name},
          {"schema_version", scenario_->schema_version}};
}

Json EdgeService::do_alarm_batch(Session& s, const Json& payload) {
  auto incoming = payload.at("alarms").get<std::vector<faultloc::Alarm>>();
  for (const auto& a : incoming) {
    if (!scenario_->graph.contains(a.element_id)) throw Error(Errc::UnknownElement, "alarm on '" + a.element_id + "'");
  }
  if (payload.value("replace", false)) s.alarms.clear();
  s.alarms.insert(s.alarms.end(), incoming.begin(), incoming.end());
  return {{"accepted", incoming.size()}, {"total", s.alarms.size()}};
}

Json EdgeService::do_localize(Session& s, const Json& payload) {
  const auto algo = parse_localize_algo(payload.value("algo", std::string("coverage")));
  const int iterations = payload.value("iterations", 3);
  const auto& alarms = s.alarms.empty() ? scenario_->alarms : s.alarms;
  Json out = run_localization(scenario_->graph, alarms, algo, iterations);
  out["alarm_source"] = s.alarms.empty() ? "scenario" : "session";
  return out;
}

Json EdgeService::do_nav(const Json& payload) {
  if (!grid_) throw Error(Errc::ScenarioInvalid, "scenario has no environment map");
  NavQuery q;
  q.from = payload.at("from").get<std::string>();
  if (payload.contains("to")) q.to = payload.at("to").get<std::string>();
  if (payload.contains("target_element")) q.target_element = payload.at("target_element").get<std::string>();
  if (payload.contains("shelf_level")) q.shelf_level = payload.at("shelf_level").get<int>();
  const NavAnswer a = navigate(*scenario_, *grid_, q);
  Json out = a.path;
  out["from"] = a.from;
  out["to"] = a.to;
  out["shelf_level"] = a.shelf_level;
  if (a.target_shelf) out["target_shelf"] = *a.target_shelf;
  return out;
}

Json EdgeService::do_card_id(Session& s, const Json& payload) {
  if (!s.capabilities.count(std::string(kArCapability))) {
    throw Error(Errc::NotCapable, "card identification is served only to sessions declaring the 'ar' capability");
  }
  const double started = clock_();
  CardIdQuery q;
  q.layout = payload.at("layout").get<std::string>();
  q.seed = payload.value("seed", std::uint64_t{0});
  if (payload.contains("jitter_sigma")) q.jitter_sigma = payload.at("jitter_sigma").get<double>();
  q.match.confidence_threshold = payload.value("confidence_threshold", q.match.confidence_threshold);
  const auto& alarms = s.alarms.empty() ? scenario_->alarms : s.alarms;
  const CardIdAnswer a = identify_cards(*scenario_, detector_, q, alarms);
  Json out = a.overlay;
  out["layout"] = q.layout;
  out["detections"] = a.detections;
  out["assignment"] = a.assignment;
  out["root_cause_id"] = a.localization ? Json(a.localization->root_cause_id) : Json(nullptr);
  out["timing"] = {{"inference_ms", clock_() - started}};
  return out;
}

void EdgeService::do_collab_join(Session& s, Request& req) {
  const auto room_id = req.payload.at("room").get<std::string>();
  if (room_id.empty()) throw Error(Errc::InvalidArgument, "room id must be non-empty");
  if (req.payload.contains("capabilities")) {
    s.capabilities.clear();
    for (const auto& c : req.payload.at("capabilities")) s.capabilities.insert(c.get<std::string>());
  }
  if (!s.room.empty() && s.room != room_id) {
    if (auto old = room(s.room, false)) {
      std::lock_guard lock(old->mu);
      old->state.leave(s.id);
    }
  }
  auto r = room(room_id, true);
  std::lock_guard lock(r->mu);
  const auto snap = r->state.join(s.id);
  s.room = room_id;
  Json payload = snap;
  payload["room"] = room_id;
  send_reply(s, req, payload);
  req.replied = true;
  for (const auto& other : snap.participants) {
    if (other != s.id) send_event(other, "joined", {{"room", room_id}, {"session_id", s.id}});
  }
}

void EdgeService::do_pose_update(Session& s, Request& req) {
  if (s.room.empty()) throw Error(Errc::NotJoined, "join a collaboration room first");
  auto update = req.payload.get<CollabObjectState>();
  auto r = room(s.room, true);
  std::lock_guard lock(r->mu);
  const PoseOutcome outcome = r->state.apply_pose(s.id, std::move(update));
  send_reply(s, req, {{"accepted", outcome.accepted}, {"registered", outcome.registered}, {"state", outcome.authoritative}});
  req.replied = true;
  for (const auto& other : outcome.broadcast_to) send_event(other, "pose", outcome.authoritative);
}

void EdgeService::do_stroke_add(Session& s, Request& req) {
  if (s.room.empty()) throw Error(Errc::NotJoined, "join a collaboration room first");
  auto stroke = req.payload.get<Stroke>();
  auto r = room(s.room, true);
  std::lock_guard lock(r->mu);
  const auto recipients = r->state.add_stroke(s.id, stroke);
  send_reply(s, req, {{"stroke", stroke}});
  req.replied = true;
  for (const auto& other : recipients) send_event(other, "stroke", stroke);
}

void EdgeService::do_chat_text(Session& s, Request& req) {
  if (s.room.empty()) throw Error(Errc::NotJoined, "join a collaboration room first");
  const auto text = req.payload.at("text").get<std::string>();
  auto r = room(s.room, true);
  std::lock_guard lock(r->mu);
  if (!r->state.is_member(s.id)) throw Error(Errc::NotJoined, "session left the room");
  send_reply(s, req, {{"delivered_to", r->state.members().size() - 1}});
  req.replied = true;
  for (const auto& other : r->state.members()) {
    if (other != s.id) send_event(other, "chat_text", {{"from", s.id}, {"text", text}});
  }
}

}  // namespace twinops::edged
