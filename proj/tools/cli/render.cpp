#include "cli/render.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace twinops::cli {

std::string fixed(double value, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << value;
  return s.str();
}

namespace {

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string point_text(const navmap::Point2& p) { return "(" + fixed(p.x, 2) + ", " + fixed(p.y, 2) + ")"; }

char arrow_glyph(double heading) {
  static constexpr char kGlyphs[] = {'>', '/', '^', '\\', '<', '/', 'v', '\\'};
  const double octant = std::round(heading / (std::numbers::pi / 4.0));
  const int idx = ((static_cast<int>(octant) % 8) + 8) % 8;
  return kGlyphs[idx];
}

}  // namespace

void print_localization(std::ostream& out, const faultloc::LocalizationResult& result,
                        std::span<const faultloc::Alarm> alarms) {
  out << "root cause: " << result.root_cause_id << "\n\n";
  std::size_t width = 7;
  for (const auto& r : result.ranking) width = std::max(width, r.element_id.size());
  out << "rank  score   " << pad("element", width) << "\n";
  for (std::size_t i = 0; i < result.ranking.size(); ++i) {
    out << pad(std::to_string(i + 1), 6) << fixed(result.ranking[i].score, 4) << "  " << result.ranking[i].element_id
        << "\n";
  }
  out << "\nexplained alarms:\n";
  for (const auto& e : result.explained) {
    const auto& a = alarms[e.alarm_index];
    out << "  [" << e.alarm_index << "] " << pad(std::string(faultloc::to_string(a.severity)), 8) << " "
        << pad(e.element_id, width) << "  <- " << e.explained_by << "\n";
  }
}

void print_navigation(std::ostream& out, const NavAnswer& answer, const navmap::Grid2D& grid) {
  const auto& p = answer.path;
  out << "route " << answer.from << " -> " << answer.to;
  if (answer.target_shelf) out << " (shelf " << *answer.target_shelf << ")";
  out << ", shelf level " << answer.shelf_level << "\n";
  out << "cells: " << p.cells.size() << ", cost: " << fixed(p.cost.value(), 3) << " (" << p.cost.axial << " axial + "
      << p.cost.diagonal << " diagonal), length: " << fixed(p.cost.value() * grid.resolution_m(), 2) << " m\n";
  out << "arrows:\n";
  for (std::size_t i = 0; i < p.arrows.size(); ++i) {
    const auto& a = p.arrows[i];
    out << "  " << pad(std::to_string(i + 1), 4) << pad(point_text(a.position_m), 16) << " heading "
        << fixed(a.heading_rad * 180.0 / std::numbers::pi, 1) << " deg\n";
  }
  out << "flag: " << point_text(p.flag.position_m) << " height " << fixed(p.flag.height_m, 2) << " m\n";
}

void render_route(std::ostream& out, const navmap::Grid2D& grid, const navmap::NavPath& path) {
  std::vector<std::string> rows(static_cast<std::size_t>(grid.ny()), std::string(static_cast<std::size_t>(grid.nx()), '.'));
  auto put = [&](navmap::Cell c, char ch) {
    rows[static_cast<std::size_t>(c.iy)][static_cast<std::size_t>(c.ix)] = ch;
  };
  for (const auto& c : grid.blocked_cells()) put(c, '#');
  for (const auto& c : path.cells) put(c, '*');
  for (const auto& a : path.arrows) put(grid.cell_at(a.position_m), arrow_glyph(a.heading_rad));
  if (!path.cells.empty()) {
    put(path.cells.front(), 'S');
    put(path.cells.back(), 'F');
  }
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) out << *it << "\n";
}

void print_card_id(std::ostream& out, const std::string& layout, const CardIdAnswer& answer) {
  const auto& items = answer.overlay.items;
  out << "layout " << layout << ": " << answer.detections.size() << " detections, " << answer.assignment.matches.size()
      << " matched\n";
  if (answer.localization) out << "root cause: " << answer.localization->root_cause_id << "\n";
  std::size_t width = 10;
  for (const auto& it : items) width = std::max(width, it.element_id.size());
  out << "\n" << pad("shelf", 10) << pad("slot", 6) << pad("element", width + 2) << pad("label", 10) << pad("conf", 7)
      << "color\n";
  for (const auto& it : items) {
    out << pad(it.shelf_id, 10) << pad(std::to_string(it.slot), 6) << pad(it.element_id, width + 2)
        << pad(it.label, 10) << pad(fixed(it.confidence, 3), 7) << cardid::to_string(it.color) << "\n";
  }
  out << "\nroot cause visible: " << (answer.overlay.root_cause_visible ? "yes" : "no") << "\n";
  out << "unmatched detections:";
  if (answer.assignment.unmatched_detections.empty()) out << " none";
  for (auto d : answer.assignment.unmatched_detections) out << " " << d << ":" << answer.detections[d].label;
  out << "\nunmatched slots:";
  if (answer.assignment.unmatched_slots.empty()) out << " none";
  for (const auto& s : answer.assignment.unmatched_slots) {
    out << " " << answer.arrangements[s.shelf].shelf_id << "#" << s.slot;
  }
  out << "\n";
}

void print_qos(std::ostream& out, const netqos::LinkSpec& link, const netqos::MeterSpec& meter,
               const netqos::QosReport& report) {
  out << "duration " << fixed(report.duration_s, 3) << " s, link " << fixed(link.capacity_gbps, 1) << " Gb/s over "
      << fixed(link.length_km, 1) << " km, meter ";
  if (meter.enabled) {
    out << "ON (cap " << fixed(meter.cbr_cap_gbps, 1) << " Gb/s, burst " << fixed(meter.burst_bytes, 0) << " B)\n";
  } else {
    out << "OFF\n";
  }
  out << "\n"
      << pad("flow", 10) << pad("class", 6) << pad("offered", 10) << pad("achieved", 10) << pad("sent", 12)
      << pad("delivered", 12) << pad("meter_drop", 12) << "queue_drop\n";
  for (const auto& f : report.flows) {
    out << pad(f.flow_id, 10) << pad(std::string(netqos::to_string(f.cls)), 6) << pad(fixed(f.offered_gbps, 3), 10)
        << pad(fixed(f.achieved_gbps, 3), 10) << pad(std::to_string(f.sent_packets), 12)
        << pad(std::to_string(f.delivered_packets), 12) << pad(std::to_string(f.meter_drops), 12) << f.queue_drops
        << "\n";
  }
  out << "\ntotal achieved: " << fixed(report.total_achieved_gbps(), 3) << " Gb/s, link busy "
      << fixed(report.link_busy_s, 4) << " s\n";
  if (report.ar_rtt_ms.empty()) {
    out << "AR RTT: no samples\n";
    return;
  }
  auto sorted = report.ar_rtt_ms;
  std::sort(sorted.begin(), sorted.end());
  auto pct = [&](double q) { return sorted[static_cast<std::size_t>(q * static_cast<double>(sorted.size() - 1))]; };
  out << "AR RTT: " << sorted.size() << " samples, mean " << fixed(report.mean_ar_rtt_ms(), 4) << " ms, p50 "
      << fixed(pct(0.5), 4) << " ms, p99 " << fixed(pct(0.99), 4) << " ms, max " << fixed(sorted.back(), 4) << " ms\n";
}

}  // namespace twinops::cli
