#pragma once

// Generators and brute-force oracles shared by the unit and acceptance tests.
// Oracles deliberately avoid calling the code under test.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "twinops/cardid.hpp"
#include "twinops/edged/collab.hpp"
#include "twinops/json_io.hpp"
#include "twinops/navmap.hpp"
#include "twinops/scenario.hpp"
#include "twinops/topology.hpp"

namespace twinops::testsupport {

using Rng = std::mt19937_64;

std::filesystem::path source_dir();
std::filesystem::path reference_scenario_path();
const Scenario& reference_scenario();

// ---- topology / localization ----

/// Random card-level graph with up to `max_elements` elements and
/// 1..`max_paths` wavelength paths that may share intermediate elements.
topology::TopologyGraph random_topology(Rng& rng, int max_elements = 50, int max_paths = 4);

/// Elements appearing on at least one path.
std::vector<std::string> on_path_elements(const topology::TopologyGraph& graph);

/// Independent coverage scoring straight from the path routes, one score per
/// distinct alarmed element (default severity weights).
std::map<std::string, double> coverage_scores(const topology::TopologyGraph& graph,
                                              const std::vector<faultloc::Alarm>& alarms);
/// Alarmed elements with the maximal oracle score.
std::set<std::string> coverage_argmax(const topology::TopologyGraph& graph, const std::vector<faultloc::Alarm>& alarms);

/// Alarms predicted by the propagation rule, as (element, severity) pairs in
/// emission order, computed without calling propagate_fault.
std::vector<std::pair<std::string, faultloc::Severity>> expected_cascade(const topology::TopologyGraph& graph,
                                                                         const std::string& fault);

// ---- navigation ----

/// Exact a + b*sqrt(2) with integer terms.
struct Surd {
  std::int64_t a = 0;
  std::int64_t b = 0;
};
/// -1, 0, +1 comparing x and y exactly.
int compare(const Surd& x, const Surd& y);

navmap::Grid2D random_grid(Rng& rng, int nx, int ny, double blocked_fraction);

/// Dijkstra over the 8-connected grid with exact costs. `strict` forbids a
/// diagonal when either orthogonal neighbour is blocked; otherwise only when
/// both are. nullopt when the goal is unreachable.
std::optional<Surd> dijkstra_cost(const navmap::Grid2D& grid, navmap::Cell start, navmap::Cell goal, bool strict);

// ---- card identification ----

/// Single-shelf layout of 1..max_slots cards drawn so that no model occurs
/// more than `max_duplicates` times; slot indices strictly increase with gaps.
cardid::SyntheticLayout random_layout(Rng& rng, const std::string& id, int max_slots = 16, int max_duplicates = 4);

// ---- collaboration ----

/// Client-side replica: applies every server message in arrival order.
struct Replica {
  std::map<std::string, edged::CollabObjectState> objects;
  std::vector<edged::Stroke> strokes;

  void apply(const Json& message);
  /// Canonical serialization of the object states, for byte comparison.
  std::string objects_bytes() const;
};

}  // namespace twinops::testsupport
