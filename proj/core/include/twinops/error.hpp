#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace twinops {

enum class Errc {
  // topology
  DuplicateId,
  DanglingEdge,
  SelfLoop,
  BrokenRoute,
  MissingLength,
  InvalidElement,
  DuplicateSlot,
  NotOnPath,
  UnknownShelf,
  UnknownElement,
  UnknownPath,
  // faultloc
  NotOnAnyPath,
  EmptyAlarms,
  // navmap
  EmptySlab,
  NoPath,
  BlockedEndpoint,
  OutOfBounds,
  InvalidShelfLevel,
  // cardid
  DetectorUnavailable,
  NoDetections,
  // edged
  BindFailure,
  MalformedFrame,
  UnknownKind,
  NonMonotoneTimestamps,
  NotJoined,
  InvalidStroke,
  InvalidPose,
  NotCapable,
  NonMonotoneMsgId,
  // netqos / generic
  InvalidConfig,
  InvalidArgument,
  // scenario / cli
  ScenarioInvalid,
  UnknownPoint,
  IoError,
};

std::string_view to_string(Errc code);

/// Exception carrying a stable error code; `what()` holds the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace twinops
