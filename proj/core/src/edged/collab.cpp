#include "twinops/edged/collab.hpp"

#include <cmath>

#include "twinops/error.hpp"

namespace twinops::edged {

void validate_pose(const CollabObjectState& s) {
  if (s.object_id.empty()) throw Error(Errc::InvalidPose, "pose without object_id");
  double norm2 = 0.0;
  for (double c : s.orientation) {
    if (!std::isfinite(c)) throw Error(Errc::InvalidPose, "non-finite quaternion component");
    norm2 += c * c;
  }
  for (double c : s.position) {
    if (!std::isfinite(c)) throw Error(Errc::InvalidPose, "non-finite position component");
  }
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-6) throw Error(Errc::InvalidPose, "orientation is not a unit quaternion");
}

void validate_stroke(const Stroke& stroke) {
  if (stroke.points.size() < 2) throw Error(Errc::InvalidStroke, "a stroke needs at least two points");
  for (const auto& p : stroke.points) {
    for (double c : p) {
      if (!std::isfinite(c)) throw Error(Errc::InvalidStroke, "non-finite stroke point");
    }
  }
}

RoomSnapshot CollabRoom::join(const SessionId& session) {
  members_.insert(session);
  return snapshot();
}

void CollabRoom::leave(const SessionId& session) { members_.erase(session); }

std::vector<SessionId> CollabRoom::others(const SessionId& session) const {
  std::vector<SessionId> out;
  for (const auto& m : members_) {
    if (m != session) out.push_back(m);
  }
  return out;
}

PoseOutcome CollabRoom::apply_pose(const SessionId& session, CollabObjectState update) {
  if (!is_member(session)) throw Error(Errc::NotJoined, "session '" + session + "' is not in room '" + id_ + "'");
  validate_pose(update);
  update.owner = session;

  PoseOutcome out;
  auto it = objects_.find(update.object_id);
  if (it == objects_.end()) {
    out.registered = true;
    it = objects_.emplace(update.object_id, update).first;
    out.accepted = true;
  } else if (update.seq > it->second.seq) {
    it->second = update;
    out.accepted = true;
  }
  out.authoritative = it->second;
  if (out.accepted) out.broadcast_to = others(session);
  return out;
}

std::vector<SessionId> CollabRoom::add_stroke(const SessionId& session, Stroke& stroke) {
  if (!is_member(session)) throw Error(Errc::NotJoined, "session '" + session + "' is not in room '" + id_ + "'");
  validate_stroke(stroke);
  stroke.author = session;
  if (stroke.color.empty()) stroke.color = "RED";
  stroke.stroke_id = id_ + "/stroke-" + std::to_string(next_stroke_++);
  strokes_.push_back(stroke);
  return others(session);
}

std::vector<CollabObjectState> CollabRoom::objects() const {
  std::vector<CollabObjectState> out;
  for (const auto& [_, s] : objects_) out.push_back(s);
  return out;
}

RoomSnapshot CollabRoom::snapshot() const { return {members(), objects(), strokes_}; }

void to_json(Json& j, const CollabObjectState& s) {
  j = Json{{"object_id", s.object_id},
           {"position", s.position},
           {"orientation", s.orientation},
           {"seq", s.seq},
           {"owner", s.owner}};
}

void from_json(const Json& j, CollabObjectState& s) {
  s.object_id = j.at("object_id").get<std::string>();
  s.position = j.at("position").get<std::array<double, 3>>();
  s.orientation = j.at("orientation").get<std::array<double, 4>>();
  s.seq = j.at("seq").get<std::int64_t>();
  s.owner = j.value("owner", std::string{});
}

void to_json(Json& j, const Stroke& s) {
  j = Json{{"stroke_id", s.stroke_id}, {"author", s.author}, {"color", s.color}, {"points", s.points}};
}

void from_json(const Json& j, Stroke& s) {
  s.stroke_id = j.value("stroke_id", std::string{});
  s.author = j.value("author", std::string{});
  s.color = j.value("color", std::string("RED"));
  s.points = j.at("points").get<std::vector<std::array<double, 3>>>();
}

void to_json(Json& j, const RoomSnapshot& s) {
  j = Json{{"participants", s.participants}, {"objects", s.objects}, {"strokes", s.strokes}};
}

}  // namespace twinops::edged
