#include "twinops/cardid.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "twinops/error.hpp"

namespace twinops::cardid {

using topology::ShelfArrangement;

namespace {

constexpr double kBoxWidthFill = 0.8;
constexpr double kBoxHeightFill = 0.7;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

// Keeps the box inside the unit square by shrinking it around its centre.
BBox clamp_box(BBox b) {
  b.cx = clamp_unit(b.cx);
  b.cy = clamp_unit(b.cy);
  b.w = std::min(b.w, 2.0 * std::min(b.cx, 1.0 - b.cx));
  b.h = std::min(b.h, 2.0 * std::min(b.cy, 1.0 - b.cy));
  return b;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Order-preserving alignment of band labels to arrangement models (LCS).
// Returns (band position, slot position) pairs; equal labels match leftmost first.
std::vector<std::pair<std::size_t, std::size_t>> align(const std::vector<std::string>& labels,
                                                       const std::vector<topology::SlotEntry>& slots) {
  const std::size_t n = labels.size();
  const std::size_t m = slots.size();
  std::vector<std::vector<std::size_t>> dp(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      dp[i][j] = labels[i] == slots[j].model ? dp[i + 1][j + 1] + 1 : std::max(dp[i + 1][j], dp[i][j + 1]);
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n && j < m) {
    if (labels[i] == slots[j].model) {
      out.emplace_back(i++, j++);
    } else if (dp[i + 1][j] >= dp[i][j + 1]) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

}  // namespace

double SyntheticLayout::floor_for(const std::string& model) const {
  auto it = confidence_floor.find(model);
  return it == confidence_floor.end() ? default_confidence_floor : it->second;
}

BBox slot_box(const SyntheticLayout& layout, std::size_t shelf_row, int slot) {
  const double rows = static_cast<double>(layout.shelves.size());
  const double cols = static_cast<double>(layout.slots_per_shelf);
  return {(slot + 0.5) / cols, (static_cast<double>(shelf_row) + 0.5) / rows, kBoxWidthFill / cols,
          kBoxHeightFill / rows};
}

void SyntheticDetector::add_layout(SyntheticLayout layout) {
  if (layout.slots_per_shelf <= 0 && !layout.shelves.empty()) {
    throw Error(Errc::InvalidArgument, "layout '" + layout.id + "' needs slots_per_shelf > 0");
  }
  for (const auto& shelf : layout.shelves) {
    for (const auto& entry : shelf.slots) {
      if (entry.slot < 0 || entry.slot >= layout.slots_per_shelf) {
        throw Error(Errc::InvalidArgument, "layout '" + layout.id + "' slot out of range");
      }
    }
  }
  const auto id = layout.id;
  layouts_.insert_or_assign(id, std::move(layout));
}

bool SyntheticDetector::has_layout(std::string_view id) const { return layouts_.find(id) != layouts_.end(); }

const SyntheticLayout& SyntheticDetector::layout(std::string_view id) const {
  auto it = layouts_.find(id);
  if (it == layouts_.end()) throw Error(Errc::DetectorUnavailable, "no synthetic layout '" + std::string(id) + "'");
  return it->second;
}

std::vector<Detection> SyntheticDetector::detect(const FrameRef& frame) const {
  const SyntheticLayout& lay = layout(frame.id);
  std::mt19937_64 rng(fnv1a(frame.id) ^ (frame.seed * 0x9E3779B97F4A7C15ULL));
  std::normal_distribution<double> jitter(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Detection> out;
  for (std::size_t row = 0; row < lay.shelves.size(); ++row) {
    for (const auto& entry : lay.shelves[row].slots) {
      BBox box = slot_box(lay, row, entry.slot);
      const double dx = jitter(rng);
      const double dy = jitter(rng);
      if (lay.jitter_sigma > 0.0) {
        box.cx += lay.jitter_sigma * dx;
        box.cy += lay.jitter_sigma * dy;
        box = clamp_box(box);
      }
      const double floor = std::clamp(lay.floor_for(entry.model), 0.0, 1.0);
      out.push_back({entry.model, box, floor + (1.0 - floor) * unit(rng)});
    }
  }
  return out;
}

SlotAssignment match_slots(std::span<const Detection> detections, std::span<const ShelfArrangement> arrangements,
                           const MatchOptions& options) {
  if (detections.empty()) throw Error(Errc::NoDetections, "nothing to match");
  if (arrangements.empty()) throw Error(Errc::InvalidArgument, "no shelf arrangement to match against");
  for (const auto& a : arrangements) {
    if (a.slots.empty()) throw Error(Errc::InvalidArgument, "shelf '" + a.shelf_id + "' has no cards");
  }

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    if (detections[i].confidence >= options.confidence_threshold) kept.push_back(i);
  }

  // Horizontal bands, top to bottom, each sorted left to right.
  std::vector<std::vector<std::size_t>> bands;
  if (!kept.empty()) {
    std::vector<double> heights;
    for (auto i : kept) heights.push_back(detections[i].bbox.h);
    const double band_height = median(heights);
    std::vector<std::size_t> by_y = kept;
    std::stable_sort(by_y.begin(), by_y.end(),
                     [&](std::size_t a, std::size_t b) { return detections[a].bbox.cy < detections[b].bbox.cy; });
    double anchor = 0.0;
    for (auto i : by_y) {
      if (bands.empty() || detections[i].bbox.cy - anchor > 0.5 * band_height) {
        bands.emplace_back();
        anchor = detections[i].bbox.cy;
      }
      bands.back().push_back(i);
    }
    for (auto& band : bands) {
      std::stable_sort(band.begin(), band.end(),
                       [&](std::size_t a, std::size_t b) { return detections[a].bbox.cx < detections[b].bbox.cx; });
    }
  }

  auto labels_of = [&](const std::vector<std::size_t>& band) {
    std::vector<std::string> labels;
    for (auto i : band) labels.push_back(detections[i].label);
    return labels;
  };

  // Band index paired with each arrangement, if any.
  std::vector<std::optional<std::size_t>> band_for(arrangements.size());
  if (arrangements.size() == 1) {
    std::size_t best_len = 0;
    for (std::size_t b = 0; b < bands.size(); ++b) {
      const auto len = align(labels_of(bands[b]), arrangements[0].slots).size();
      if (!band_for[0] || len > best_len) {
        band_for[0] = b;
        best_len = len;
      }
    }
  } else {
    for (std::size_t a = 0; a < arrangements.size() && a < bands.size(); ++a) band_for[a] = a;
  }

  SlotAssignment out;
  std::set<std::size_t> matched_detections;
  for (std::size_t a = 0; a < arrangements.size(); ++a) {
    const auto& slots = arrangements[a].slots;
    std::vector<bool> slot_used(slots.size(), false);
    if (band_for[a]) {
      const auto& band = bands[*band_for[a]];
      for (auto [bi, sj] : align(labels_of(band), slots)) {
        out.matches.push_back({band[bi], a, slots[sj].slot});
        matched_detections.insert(band[bi]);
        slot_used[sj] = true;
      }
    }
    for (std::size_t j = 0; j < slots.size(); ++j) {
      if (!slot_used[j]) out.unmatched_slots.push_back({a, slots[j].slot});
    }
  }
  for (std::size_t i = 0; i < detections.size(); ++i) {
    if (!matched_detections.count(i)) out.unmatched_detections.push_back(i);
  }
  return out;
}

SlotAssignment match_slots(std::span<const Detection> detections, const ShelfArrangement& arrangement,
                           const MatchOptions& options) {
  return match_slots(detections, std::span<const ShelfArrangement>(&arrangement, 1), options);
}

std::string_view to_string(OverlayColor c) {
  switch (c) {
    case OverlayColor::None: return "NONE";
    case OverlayColor::Red: return "RED";
    case OverlayColor::Blue: return "BLUE";
  }
  return "?";
}

OverlayReport overlay(const SlotAssignment& assignment, std::span<const Detection> detections,
                      std::span<const ShelfArrangement> arrangements,
                      const faultloc::LocalizationResult* localization, std::span<const faultloc::Alarm> alarms) {
  std::set<std::string> alarmed;
  for (const auto& a : alarms) alarmed.insert(a.element_id);
  const std::string* root = localization ? &localization->root_cause_id : nullptr;

  OverlayReport report;
  for (const auto& m : assignment.matches) {
    const auto& shelf = arrangements[m.shelf];
    auto entry = std::find_if(shelf.slots.begin(), shelf.slots.end(),
                              [&](const topology::SlotEntry& e) { return e.slot == m.slot; });
    if (entry == shelf.slots.end()) continue;
    const Detection& d = detections[m.detection];
    OverlayItem item{m.detection, shelf.shelf_id, m.slot, entry->element_id, d.label, d.confidence, d.bbox,
                     OverlayColor::None};
    if (root && *root == entry->element_id) {
      item.color = OverlayColor::Red;
      report.root_cause_visible = true;
    } else if (alarmed.count(entry->element_id)) {
      item.color = OverlayColor::Blue;
    }
    report.items.push_back(std::move(item));
  }
  return report;
}

}  // namespace twinops::cardid
