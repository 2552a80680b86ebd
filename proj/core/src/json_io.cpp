#include "twinops/json_io.hpp"

#include <algorithm>

#include "twinops/error.hpp"

namespace twinops {

namespace topology {

void to_json(Json& j, const Element& e) {
  j = Json{{"id", e.id}, {"kind", to_string(e.kind)}, {"model", e.model}, {"node", e.node}};
  if (e.shelf) j["shelf"] = *e.shelf;
  if (e.slot) j["slot"] = *e.slot;
}

void from_json(const Json& j, Element& e) {
  e.id = j.at("id").get<std::string>();
  e.kind = parse_element_kind(j.at("kind").get<std::string>());
  e.model = j.value("model", std::string{});
  e.node = j.value("node", std::string{});
  e.shelf.reset();
  e.slot.reset();
  if (j.contains("shelf") && !j.at("shelf").is_null()) e.shelf = j.at("shelf").get<std::string>();
  if (j.contains("slot") && !j.at("slot").is_null()) e.slot = j.at("slot").get<int>();
}

void to_json(Json& j, const WavelengthPath& p) {
  j = Json{{"id", p.id}, {"route", p.route}, {"line_rate_gbps", p.line_rate_gbps}};
}

void from_json(const Json& j, WavelengthPath& p) {
  p.id = j.at("id").get<std::string>();
  p.route = j.at("route").get<std::vector<std::string>>();
  p.line_rate_gbps = j.value("line_rate_gbps", 0.0);
}

void to_json(Json& j, const ShelfArrangement& a) {
  Json slots = Json::array();
  for (const auto& s : a.slots) slots.push_back({{"slot", s.slot}, {"element_id", s.element_id}, {"model", s.model}});
  j = Json{{"shelf_id", a.shelf_id}, {"slots", slots}};
}

Json graph_to_json(const TopologyGraph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges()) edges.push_back(Json::array({e.from, e.to}));
  Json lengths = Json::object();
  for (const auto& [id, km] : g.fiber_lengths_km()) lengths[id] = km;
  return Json{{"elements", g.elements()}, {"edges", edges}, {"paths", g.paths()}, {"fiber_lengths_km", lengths}};
}

TopologyGraph graph_from_json(const Json& j) {
  std::vector<Element> elements = j.value("elements", Json::array()).get<std::vector<Element>>();
  std::vector<Edge> edges;
  for (const auto& e : j.value("edges", Json::array())) {
    if (!e.is_array() || e.size() != 2) throw Error(Errc::ScenarioInvalid, "edge must be a [from, to] pair");
    edges.push_back({e.at(0).get<std::string>(), e.at(1).get<std::string>()});
  }
  std::vector<WavelengthPath> paths = j.value("paths", Json::array()).get<std::vector<WavelengthPath>>();
  std::map<std::string, double> lengths = j.value("fiber_lengths_km", Json::object()).get<std::map<std::string, double>>();
  return TopologyGraph::build(std::move(elements), std::move(edges), std::move(paths), std::move(lengths));
}

}  // namespace topology

namespace faultloc {

void to_json(Json& j, const Alarm& a) {
  j = Json{{"element_id", a.element_id}, {"text", a.text}, {"severity", to_string(a.severity)},
           {"timestamp_ms", a.timestamp_ms}};
}

void from_json(const Json& j, Alarm& a) {
  a.element_id = j.at("element_id").get<std::string>();
  a.text = j.value("text", std::string{});
  a.timestamp_ms = j.value("timestamp_ms", std::int64_t{0});
  const Severity parsed = parse_severity(a.text);
  if (j.contains("severity")) {
    a.severity = severity_from_name(j.at("severity").get<std::string>());
    if (!a.text.empty() && a.severity != parsed) {
      throw Error(Errc::InvalidArgument, "alarm on '" + a.element_id + "' declares " +
                                             std::string(to_string(a.severity)) + " but its text reads as " +
                                             std::string(to_string(parsed)));
    }
  } else {
    a.severity = parsed;
  }
}

void to_json(Json& j, const LocalizationResult& r) {
  Json ranking = Json::array();
  for (const auto& e : r.ranking) ranking.push_back({{"element_id", e.element_id}, {"score", e.score}});
  Json explained = Json::array();
  for (const auto& e : r.explained) {
    explained.push_back({{"alarm_index", e.alarm_index}, {"element_id", e.element_id}, {"explained_by", e.explained_by}});
  }
  j = Json{{"root_cause_id", r.root_cause_id}, {"ranking", ranking}, {"explained", explained}};
}

}  // namespace faultloc

namespace navmap {

void to_json(Json& j, const Cell& c) { j = Json::array({c.ix, c.iy}); }
void from_json(const Json& j, Cell& c) {
  c.ix = j.at(0).get<int>();
  c.iy = j.at(1).get<int>();
}
void to_json(Json& j, const Point2& p) { j = Json::array({p.x, p.y}); }
void from_json(const Json& j, Point2& p) {
  p.x = j.at(0).get<double>();
  p.y = j.at(1).get<double>();
}

void to_json(Json& j, const NavPath& p) {
  Json arrows = Json::array();
  for (const auto& a : p.arrows) arrows.push_back({{"position_m", a.position_m}, {"heading_rad", a.heading_rad}});
  j = Json{{"cells", p.cells},
           {"cost", p.cost.value()},
           {"cost_terms", {{"axial", p.cost.axial}, {"diagonal", p.cost.diagonal}}},
           {"arrows", arrows},
           {"flag", {{"position_m", p.flag.position_m}, {"height_m", p.flag.height_m}}}};
}

void from_json(const Json& j, OccupancyGrid3D& g) {
  g.resolution_m = j.at("resolution_m").get<double>();
  g.dims = j.at("dims").get<std::array<int, 3>>();
  g.origin_m = j.value("origin_m", std::array<double, 3>{0.0, 0.0, 0.0});
  g.occupied.clear();
  for (const auto& v : j.at("occupied")) g.occupied.push_back({v.at(0).get<int>(), v.at(1).get<int>(), v.at(2).get<int>()});
  g.validate();
}

void to_json(Json& j, const OccupancyGrid3D& g) {
  Json occ = Json::array();
  for (const auto& v : g.occupied) occ.push_back(Json::array({v.ix, v.iy, v.iz}));
  j = Json{{"resolution_m", g.resolution_m}, {"dims", g.dims}, {"origin_m", g.origin_m}, {"occupied", occ}};
}

}  // namespace navmap

namespace cardid {

void to_json(Json& j, const BBox& b) { j = Json{{"cx", b.cx}, {"cy", b.cy}, {"w", b.w}, {"h", b.h}}; }

void to_json(Json& j, const Detection& d) {
  j = Json{{"label", d.label}, {"bbox", d.bbox}, {"confidence", d.confidence}};
}

void to_json(Json& j, const OverlayReport& r) {
  Json items = Json::array();
  for (const auto& it : r.items) {
    items.push_back({{"detection", it.detection},
                     {"shelf_id", it.shelf_id},
                     {"slot", it.slot},
                     {"element_id", it.element_id},
                     {"label", it.label},
                     {"confidence", it.confidence},
                     {"bbox", it.bbox},
                     {"color", to_string(it.color)}});
  }
  j = Json{{"items", items}, {"root_cause_visible", r.root_cause_visible}};
}

void to_json(Json& j, const SlotAssignment& a) {
  Json matches = Json::array();
  for (const auto& m : a.matches) matches.push_back({{"detection", m.detection}, {"shelf", m.shelf}, {"slot", m.slot}});
  Json unmatched_slots = Json::array();
  for (const auto& s : a.unmatched_slots) unmatched_slots.push_back({{"shelf", s.shelf}, {"slot", s.slot}});
  j = Json{{"matches", matches}, {"unmatched_detections", a.unmatched_detections}, {"unmatched_slots", unmatched_slots}};
}

}  // namespace cardid

namespace netqos {

void to_json(Json& j, const QosReport& r) {
  Json flows = Json::array();
  for (const auto& f : r.flows) {
    flows.push_back({{"flow_id", f.flow_id},
                     {"class", to_string(f.cls)},
                     {"offered_gbps", f.offered_gbps},
                     {"achieved_gbps", f.achieved_gbps},
                     {"sent_packets", f.sent_packets},
                     {"delivered_packets", f.delivered_packets},
                     {"meter_drops", f.meter_drops},
                     {"queue_drops", f.queue_drops}});
  }
  Json rtt = {{"count", r.ar_rtt_ms.size()}};
  if (!r.ar_rtt_ms.empty()) {
    std::vector<double> sorted = r.ar_rtt_ms;
    std::sort(sorted.begin(), sorted.end());
    auto pct = [&](double q) { return sorted[static_cast<std::size_t>(q * static_cast<double>(sorted.size() - 1))]; };
    rtt["mean_ms"] = r.mean_ar_rtt_ms();
    rtt["min_ms"] = sorted.front();
    rtt["p50_ms"] = pct(0.5);
    rtt["p99_ms"] = pct(0.99);
    rtt["max_ms"] = sorted.back();
  }
  j = Json{{"duration_s", r.duration_s},
           {"flows", flows},
           {"total_achieved_gbps", r.total_achieved_gbps()},
           {"link_busy_s", r.link_busy_s},
           {"ar_rtt", rtt}};
}

}  // namespace netqos

void to_json(Json& j, const HistogramBin& b) { j = Json{{"lower", b.lower}, {"upper", b.upper}, {"count", b.count}}; }

}  // namespace twinops
