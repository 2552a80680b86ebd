#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twinops/cardid.hpp"
#include "twinops/faultloc.hpp"
#include "twinops/json_io.hpp"
#include "twinops/navmap.hpp"
#include "twinops/netqos.hpp"
#include "twinops/topology.hpp"

namespace twinops {

inline constexpr int kScenarioSchemaVersion = 1;

/// Physical placement of a shelf: which rack (named point) and level.
struct ShelfInfo {
  std::string id;
  std::string rack_point;
  int level = 0;
};

struct NavigationDefaults {
  double slab_min_m = 0.1;
  double slab_max_m = 1.8;
  navmap::NavOptions options;
};

struct QosDefaults {
  netqos::LinkSpec link;
  netqos::MeterSpec meter;
  std::vector<netqos::FlowSpec> flows;
  netqos::SimOptions options;
};

/// Everything a scenario file describes, with cross-references resolved.
struct Scenario {
  int schema_version = kScenarioSchemaVersion;
  std::string name;
  topology::TopologyGraph graph;
  std::vector<faultloc::Alarm> alarms;
  std::vector<ShelfInfo> shelves;
  std::optional<std::string> envmap_ref;
  std::optional<navmap::OccupancyGrid3D> envmap;
  std::map<std::string, navmap::Point2> points;
  NavigationDefaults navigation;
  QosDefaults qos;
  std::vector<cardid::SyntheticLayout> layouts;

  /// Throws UnknownShelf.
  const ShelfInfo& shelf_info(const std::string& shelf_id) const;
  /// Throws UnknownPoint.
  navmap::Point2 point(const std::string& name) const;
  /// 2D navigation grid from the environment map. Throws ScenarioInvalid when
  /// the scenario has no map.
  navmap::Grid2D nav_grid() const;
  /// Arrangements of a layout's shelves, top to bottom.
  std::vector<topology::ShelfArrangement> arrangements_for_layout(const std::string& layout_id) const;
  cardid::SyntheticDetector make_detector() const;
};

/// Parses a scenario document; relative `envmap_ref` paths resolve against
/// `base_dir`. Throws ScenarioInvalid (and IoError for an unreadable map).
Scenario parse_scenario(const Json& doc, const std::filesystem::path& base_dir);

/// Throws IoError when the file cannot be read, ScenarioInvalid otherwise.
Scenario load_scenario(const std::filesystem::path& file);

navmap::OccupancyGrid3D load_envmap(const std::filesystem::path& file);

Json read_json_file(const std::filesystem::path& file);

}  // namespace twinops
