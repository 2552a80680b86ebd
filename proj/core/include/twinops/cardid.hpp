#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twinops/faultloc.hpp"
#include "twinops/topology.hpp"

namespace twinops::cardid {

/// Normalized image-space box; (cx, cy) is the centre, y grows downwards.
struct BBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  bool operator==(const BBox&) const = default;
};

struct Detection {
  std::string label;
  BBox bbox;
  double confidence = 0.0;

  bool operator==(const Detection&) const = default;
};

/// Opaque frame handle. Only detectors interpret it.
struct FrameRef {
  std::string id;
  std::uint64_t seed = 0;
};

class Detector {
 public:
  virtual ~Detector() = default;
  /// Throws DetectorUnavailable when the frame cannot be processed.
  virtual std::vector<Detection> detect(const FrameRef& frame) const = 0;
};

/// Ground-truth geometry for synthetic frames: shelves stacked top to bottom,
/// each with `slots_per_shelf` equal-width slot positions.
struct SyntheticLayout {
  std::string id;
  std::vector<topology::ShelfArrangement> shelves;
  int slots_per_shelf = 0;
  double jitter_sigma = 0.0;
  double default_confidence_floor = 0.6;
  std::map<std::string, double> confidence_floor;  // per model label

  double floor_for(const std::string& model) const;
};

/// Exact slot-centred box of `slot` on the `shelf_row`-th shelf of a layout.
BBox slot_box(const SyntheticLayout& layout, std::size_t shelf_row, int slot);

/// Renders detections from registered layouts. Pure and safe for concurrent use.
class SyntheticDetector final : public Detector {
 public:
  void add_layout(SyntheticLayout layout);
  bool has_layout(std::string_view id) const;
  const SyntheticLayout& layout(std::string_view id) const;

  /// Detections in layout order (shelf row, then slot). Box centres get
  /// Gaussian jitter with the layout's sigma; confidences are drawn uniformly
  /// from [floor, 1]. Deterministic per (frame id, seed).
  std::vector<Detection> detect(const FrameRef& frame) const override;

 private:
  std::map<std::string, SyntheticLayout, std::less<>> layouts_;
};

struct SlotMatch {
  std::size_t detection = 0;
  std::size_t shelf = 0;  // index into the arrangement list
  int slot = 0;

  bool operator==(const SlotMatch&) const = default;
};

struct SlotRef {
  std::size_t shelf = 0;
  int slot = 0;

  bool operator==(const SlotRef&) const = default;
};

struct SlotAssignment {
  std::vector<SlotMatch> matches;  // ordered by (shelf, slot)
  std::vector<std::size_t> unmatched_detections;
  std::vector<SlotRef> unmatched_slots;
};

struct MatchOptions {
  double confidence_threshold = 0.5;
};

/// Band-and-order slot matching. With several arrangements, bands (top to
/// bottom) pair with arrangements in order; with one, the best-aligned band
/// wins. Throws NoDetections and InvalidArgument on an empty arrangement.
SlotAssignment match_slots(std::span<const Detection> detections,
                           std::span<const topology::ShelfArrangement> arrangements,
                           const MatchOptions& options = {});

SlotAssignment match_slots(std::span<const Detection> detections, const topology::ShelfArrangement& arrangement,
                           const MatchOptions& options = {});

enum class OverlayColor { None, Red, Blue };

std::string_view to_string(OverlayColor c);

struct OverlayItem {
  std::size_t detection = 0;
  std::string shelf_id;
  int slot = 0;
  std::string element_id;
  std::string label;
  double confidence = 0.0;
  BBox bbox;
  OverlayColor color = OverlayColor::None;
};

struct OverlayReport {
  std::vector<OverlayItem> items;  // slot order
  bool root_cause_visible = false;
};

/// RED for the root cause, BLUE for other alarmed cards, NONE otherwise.
OverlayReport overlay(const SlotAssignment& assignment, std::span<const Detection> detections,
                      std::span<const topology::ShelfArrangement> arrangements,
                      const faultloc::LocalizationResult* localization, std::span<const faultloc::Alarm> alarms);

}  // namespace twinops::cardid
