#include "twinops/error.hpp"

namespace twinops {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::DanglingEdge: return "DanglingEdge";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::BrokenRoute: return "BrokenRoute";
    case Errc::MissingLength: return "MissingLength";
    case Errc::InvalidElement: return "InvalidElement";
    case Errc::DuplicateSlot: return "DuplicateSlot";
    case Errc::NotOnPath: return "NotOnPath";
    case Errc::UnknownShelf: return "UnknownShelf";
    case Errc::UnknownElement: return "UnknownElement";
    case Errc::UnknownPath: return "UnknownPath";
    case Errc::NotOnAnyPath: return "NotOnAnyPath";
    case Errc::EmptyAlarms: return "EmptyAlarms";
    case Errc::EmptySlab: return "EmptySlab";
    case Errc::NoPath: return "NoPath";
    case Errc::BlockedEndpoint: return "BlockedEndpoint";
    case Errc::OutOfBounds: return "OutOfBounds";
    case Errc::InvalidShelfLevel: return "InvalidShelfLevel";
    case Errc::DetectorUnavailable: return "DetectorUnavailable";
    case Errc::NoDetections: return "NoDetections";
    case Errc::BindFailure: return "BindFailure";
    case Errc::MalformedFrame: return "MalformedFrame";
    case Errc::UnknownKind: return "UnknownKind";
    case Errc::NonMonotoneTimestamps: return "NonMonotoneTimestamps";
    case Errc::NotJoined: return "NotJoined";
    case Errc::InvalidStroke: return "InvalidStroke";
    case Errc::InvalidPose: return "InvalidPose";
    case Errc::NotCapable: return "NotCapable";
    case Errc::NonMonotoneMsgId: return "NonMonotoneMsgId";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ScenarioInvalid: return "ScenarioInvalid";
    case Errc::UnknownPoint: return "UnknownPoint";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace twinops
