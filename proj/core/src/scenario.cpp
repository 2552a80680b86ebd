#include "twinops/scenario.hpp"

#include <fstream>
#include <set>

#include "twinops/error.hpp"

namespace twinops {

namespace {

netqos::TrafficClass parse_class(const std::string& s) {
  if (s == "AR") return netqos::TrafficClass::AR;
  if (s == "CBR") return netqos::TrafficClass::CBR;
  throw Error(Errc::ScenarioInvalid, "unknown traffic class '" + s + "'");
}

void parse_qos(const Json& j, QosDefaults& q) {
  if (j.contains("link")) {
    const auto& l = j.at("link");
    q.link.capacity_gbps = l.value("capacity_gbps", q.link.capacity_gbps);
    q.link.length_km = l.value("length_km", q.link.length_km);
    q.link.per_km_delay_us = l.value("per_km_delay_us", q.link.per_km_delay_us);
  }
  if (j.contains("meter")) {
    const auto& m = j.at("meter");
    q.meter.enabled = m.value("enabled", q.meter.enabled);
    q.meter.cbr_cap_gbps = m.value("cbr_cap_gbps", q.meter.cbr_cap_gbps);
    q.meter.burst_bytes = m.value("burst_bytes", q.meter.burst_bytes);
  }
  for (const auto& f : j.value("flows", Json::array())) {
    netqos::FlowSpec spec;
    spec.flow_id = f.at("flow_id").get<std::string>();
    spec.cls = parse_class(f.at("class").get<std::string>());
    spec.offered_gbps = f.at("offered_gbps").get<double>();
    spec.packet_bytes = f.value("packet_bytes", spec.packet_bytes);
    q.flows.push_back(spec);
  }
  q.options.duration_s = j.value("duration_s", q.options.duration_s);
  q.options.seed = j.value("seed", q.options.seed);
  q.options.queue_limit_bytes = j.value("queue_limit_bytes", q.options.queue_limit_bytes);
  if (j.contains("wifi")) {
    const auto& w = j.at("wifi");
    q.options.wifi.enabled = w.value("enabled", q.options.wifi.enabled);
    q.options.wifi.rate_gbps = w.value("rate_gbps", q.options.wifi.rate_gbps);
    q.options.wifi.latency_ms = w.value("latency_ms", q.options.wifi.latency_ms);
  }
}

void parse_navigation(const Json& j, NavigationDefaults& nav) {
  if (j.contains("slab_m")) {
    nav.slab_min_m = j.at("slab_m").at(0).get<double>();
    nav.slab_max_m = j.at("slab_m").at(1).get<double>();
  }
  nav.options.arrow_spacing_m = j.value("arrow_spacing_m", nav.options.arrow_spacing_m);
  if (j.contains("flag_heights_m")) {
    nav.options.flag_heights.lower_m = j.at("flag_heights_m").at(0).get<double>();
    nav.options.flag_heights.upper_m = j.at("flag_heights_m").at(1).get<double>();
  }
  const auto rule = j.value("diagonal_rule", std::string("no_corner_cutting"));
  if (rule == "no_corner_cutting") {
    nav.options.diagonal_rule = navmap::DiagonalRule::NoCornerCutting;
  } else if (rule == "no_squeeze") {
    nav.options.diagonal_rule = navmap::DiagonalRule::NoSqueeze;
  } else {
    throw Error(Errc::ScenarioInvalid, "unknown diagonal_rule '" + rule + "'");
  }
}

Scenario parse_unchecked(const Json& doc, const std::filesystem::path& base_dir) {
  Scenario s;
  s.schema_version = doc.value("schema_version", 0);
  if (s.schema_version != kScenarioSchemaVersion) {
    throw Error(Errc::ScenarioInvalid, "unsupported schema_version " + std::to_string(s.schema_version));
  }
  s.name = doc.value("name", std::string{});
  s.graph = topology::graph_from_json(doc);
  s.alarms = doc.value("alarms", Json::array()).get<std::vector<faultloc::Alarm>>();
  for (const auto& a : s.alarms) {
    if (!s.graph.contains(a.element_id)) throw Error(Errc::ScenarioInvalid, "alarm on unknown element '" + a.element_id + "'");
  }

  const Json points = doc.value("points", Json::object());
  for (const auto& [name, p] : points.items()) s.points[name] = p.get<navmap::Point2>();

  const auto known_shelves = s.graph.shelf_ids();
  const std::set<std::string> shelf_set(known_shelves.begin(), known_shelves.end());
  for (const auto& sh : doc.value("shelves", Json::array())) {
    ShelfInfo info{sh.at("id").get<std::string>(), sh.value("rack_point", std::string{}), sh.value("level", 0)};
    if (!shelf_set.count(info.id)) throw Error(Errc::ScenarioInvalid, "shelf '" + info.id + "' holds no cards");
    if (!info.rack_point.empty() && !s.points.count(info.rack_point)) {
      throw Error(Errc::ScenarioInvalid, "shelf '" + info.id + "' references unknown point '" + info.rack_point + "'");
    }
    if (info.level != 0 && info.level != 1) throw Error(Errc::ScenarioInvalid, "shelf '" + info.id + "' level must be 0 or 1");
    s.shelves.push_back(info);
  }

  if (doc.contains("navigation")) parse_navigation(doc.at("navigation"), s.navigation);
  if (doc.contains("qos")) parse_qos(doc.at("qos"), s.qos);

  for (const auto& l : doc.value("layouts", Json::array())) {
    cardid::SyntheticLayout layout;
    layout.id = l.at("id").get<std::string>();
    layout.slots_per_shelf = l.at("slots_per_shelf").get<int>();
    layout.jitter_sigma = l.value("jitter_sigma", 0.0);
    layout.default_confidence_floor = l.value("default_confidence_floor", layout.default_confidence_floor);
    layout.confidence_floor = l.value("confidence_floor", Json::object()).get<std::map<std::string, double>>();
    for (const auto& shelf : l.at("shelves")) {
      const auto id = shelf.get<std::string>();
      if (!shelf_set.count(id)) throw Error(Errc::ScenarioInvalid, "layout '" + layout.id + "' uses unknown shelf '" + id + "'");
      layout.shelves.push_back(s.graph.arrangement_for(id));
    }
    s.layouts.push_back(std::move(layout));
  }

  if (doc.contains("envmap_ref") && !doc.at("envmap_ref").is_null()) {
    s.envmap_ref = doc.at("envmap_ref").get<std::string>();
    std::filesystem::path map_path(*s.envmap_ref);
    if (map_path.is_relative()) map_path = base_dir / map_path;
    s.envmap = load_envmap(map_path);
  }
  return s;
}

}  // namespace

const ShelfInfo& Scenario::shelf_info(const std::string& shelf_id) const {
  for (const auto& s : shelves) {
    if (s.id == shelf_id) return s;
  }
  throw Error(Errc::UnknownShelf, "no placement for shelf '" + shelf_id + "'");
}

navmap::Point2 Scenario::point(const std::string& name) const {
  auto it = points.find(name);
  if (it == points.end()) throw Error(Errc::UnknownPoint, "'" + name + "'");
  return it->second;
}

navmap::Grid2D Scenario::nav_grid() const {
  if (!envmap) throw Error(Errc::ScenarioInvalid, "scenario has no environment map");
  return navmap::project_2d(*envmap, navigation.slab_min_m, navigation.slab_max_m);
}

std::vector<topology::ShelfArrangement> Scenario::arrangements_for_layout(const std::string& layout_id) const {
  for (const auto& l : layouts) {
    if (l.id == layout_id) return l.shelves;
  }
  throw Error(Errc::DetectorUnavailable, "no synthetic layout '" + layout_id + "'");
}

cardid::SyntheticDetector Scenario::make_detector() const {
  cardid::SyntheticDetector detector;
  for (const auto& l : layouts) detector.add_layout(l);
  return detector;
}

Json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(Errc::IoError, "cannot read '" + file.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(Errc::ScenarioInvalid, file.string() + ": " + e.what());
  }
}

navmap::OccupancyGrid3D load_envmap(const std::filesystem::path& file) {
  const Json doc = read_json_file(file);
  try {
    return doc.get<navmap::OccupancyGrid3D>();
  } catch (const Json::exception& e) {
    throw Error(Errc::ScenarioInvalid, file.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(Errc::ScenarioInvalid, file.string() + ": " + e.what());
  }
}

Scenario parse_scenario(const Json& doc, const std::filesystem::path& base_dir) {
  try {
    return parse_unchecked(doc, base_dir);
  } catch (const Json::exception& e) {
    throw Error(Errc::ScenarioInvalid, e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::IoError || e.code() == Errc::ScenarioInvalid) throw;
    throw Error(Errc::ScenarioInvalid, e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& file) {
  return parse_scenario(read_json_file(file), file.parent_path());
}

}  // namespace twinops
