#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "twinops/json_io.hpp"

namespace twinops::edged {

using SessionId = std::string;

/// Pose of one shared 3D model. Orientation is a unit quaternion (w, x, y, z).
struct CollabObjectState {
  std::string object_id;
  std::array<double, 3> position{0.0, 0.0, 0.0};
  std::array<double, 4> orientation{1.0, 0.0, 0.0, 0.0};
  std::int64_t seq = 0;
  SessionId owner;

  bool operator==(const CollabObjectState&) const = default;
};

struct Stroke {
  std::string stroke_id;
  SessionId author;
  std::string color = "RED";
  std::vector<std::array<double, 3>> points;

  bool operator==(const Stroke&) const = default;
};

struct PoseOutcome {
  bool accepted = false;
  bool registered = false;               // first update for this object
  CollabObjectState authoritative;       // state after the update was considered
  std::vector<SessionId> broadcast_to;   // other members, empty when rejected
};

struct RoomSnapshot {
  std::vector<SessionId> participants;
  std::vector<CollabObjectState> objects;
  std::vector<Stroke> strokes;
};

/// Server-authoritative shared state of one collaboration room: last writer
/// wins by per-object sequence number; strokes form an append-only log.
/// Not internally synchronized; the owner serializes access.
class CollabRoom {
 public:
  explicit CollabRoom(std::string id) : id_(std::move(id)) {}

  const std::string& id() const { return id_; }

  /// Adds the session and returns the catch-up snapshot (all poses and strokes).
  RoomSnapshot join(const SessionId& session);
  void leave(const SessionId& session);
  bool is_member(const SessionId& session) const { return members_.count(session) != 0; }
  std::vector<SessionId> members() const { return {members_.begin(), members_.end()}; }

  /// Accepts iff update.seq exceeds the stored seq (unknown objects register on
  /// first update). Throws NotJoined or InvalidPose.
  PoseOutcome apply_pose(const SessionId& session, CollabObjectState update);

  /// Appends the stroke under a room-assigned id and returns the other members.
  /// Throws NotJoined or InvalidStroke.
  std::vector<SessionId> add_stroke(const SessionId& session, Stroke& stroke);

  std::vector<CollabObjectState> objects() const;
  const std::vector<Stroke>& strokes() const { return strokes_; }
  RoomSnapshot snapshot() const;

 private:
  std::string id_;
  std::set<SessionId> members_;
  std::map<std::string, CollabObjectState> objects_;
  std::vector<Stroke> strokes_;
  std::uint64_t next_stroke_ = 1;

  std::vector<SessionId> others(const SessionId& session) const;
};

/// Throws InvalidPose when the quaternion norm is off by more than 1e-6 or a
/// component is not finite.
void validate_pose(const CollabObjectState& state);
/// Throws InvalidStroke on fewer than two points or non-finite coordinates.
void validate_stroke(const Stroke& stroke);

void to_json(Json& j, const CollabObjectState& s);
void from_json(const Json& j, CollabObjectState& s);
void to_json(Json& j, const Stroke& s);
void from_json(const Json& j, Stroke& s);
void to_json(Json& j, const RoomSnapshot& s);

}  // namespace twinops::edged
