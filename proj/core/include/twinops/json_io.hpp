#pragma once

// JSON encodings shared by scenario files, the edge-service wire protocol and
// CLI reports.

#include <nlohmann/json.hpp>

#include "twinops/cardid.hpp"
#include "twinops/faultloc.hpp"
#include "twinops/histogram.hpp"
#include "twinops/navmap.hpp"
#include "twinops/netqos.hpp"
#include "twinops/topology.hpp"

namespace twinops {

using Json = nlohmann::json;

namespace topology {
void to_json(Json& j, const Element& e);
void from_json(const Json& j, Element& e);
void to_json(Json& j, const WavelengthPath& p);
void from_json(const Json& j, WavelengthPath& p);
void to_json(Json& j, const ShelfArrangement& a);

/// Topology keys of a scenario document (elements, edges, paths, fiber_lengths_km).
Json graph_to_json(const TopologyGraph& g);
/// Inverse of graph_to_json; validation errors propagate from TopologyGraph::build.
TopologyGraph graph_from_json(const Json& j);
}  // namespace topology

namespace faultloc {
void to_json(Json& j, const Alarm& a);
/// `severity` is optional; when absent it is parsed from `text`. A given
/// severity must agree with the text classification for non-empty text.
void from_json(const Json& j, Alarm& a);
void to_json(Json& j, const LocalizationResult& r);
}  // namespace faultloc

namespace navmap {
void to_json(Json& j, const Cell& c);
void from_json(const Json& j, Cell& c);
void to_json(Json& j, const Point2& p);
void from_json(const Json& j, Point2& p);
void to_json(Json& j, const NavPath& p);
void from_json(const Json& j, OccupancyGrid3D& g);
void to_json(Json& j, const OccupancyGrid3D& g);
}  // namespace navmap

namespace cardid {
void to_json(Json& j, const BBox& b);
void to_json(Json& j, const Detection& d);
void to_json(Json& j, const OverlayReport& r);
void to_json(Json& j, const SlotAssignment& a);
}  // namespace cardid

namespace netqos {
/// Summary without the raw RTT sample list.
void to_json(Json& j, const QosReport& r);
}  // namespace netqos

void to_json(Json& j, const HistogramBin& b);

}  // namespace twinops
