#include "twinops/topology.hpp"

#include <algorithm>
#include <set>

#include "twinops/error.hpp"

namespace twinops::topology {

namespace {

const std::vector<std::string> kNoSuccessors;
const std::vector<PathPosition> kNoOccurrences;

}  // namespace

std::string_view to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::OT: return "OT";
    case ElementKind::LA: return "LA";
    case ElementKind::WSS: return "WSS";
    case ElementKind::AA: return "AA";
    case ElementKind::MCS: return "MCS";
    case ElementKind::FiberSpan: return "FIBER_SPAN";
  }
  return "?";
}

ElementKind parse_element_kind(std::string_view name) {
  for (auto kind : {ElementKind::OT, ElementKind::LA, ElementKind::WSS, ElementKind::AA,
                    ElementKind::MCS, ElementKind::FiberSpan}) {
    if (to_string(kind) == name) return kind;
  }
  throw Error(Errc::InvalidElement, "unknown element kind '" + std::string(name) + "'");
}

TopologyGraph TopologyGraph::build(std::vector<Element> elements, std::vector<Edge> edges,
                                   std::vector<WavelengthPath> paths,
                                   std::map<std::string, double> fiber_lengths_km) {
  TopologyGraph g;

  std::set<std::pair<std::string, int>> used_slots;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const Element& e = elements[i];
    if (e.id.empty()) throw Error(Errc::InvalidElement, "element with empty id");
    if (!g.index_.emplace(e.id, i).second) throw Error(Errc::DuplicateId, "element '" + e.id + "'");
    if (e.shelf.has_value() != e.slot.has_value()) {
      throw Error(Errc::InvalidElement, "element '" + e.id + "' must carry both shelf and slot or neither");
    }
    if (e.kind == ElementKind::FiberSpan && e.shelf) {
      throw Error(Errc::InvalidElement, "fiber span '" + e.id + "' cannot occupy a shelf slot");
    }
    if (e.slot) {
      if (*e.slot < 0) throw Error(Errc::InvalidElement, "element '" + e.id + "' has a negative slot");
      if (!used_slots.emplace(*e.shelf, *e.slot).second) {
        throw Error(Errc::DuplicateSlot,
                    "shelf '" + *e.shelf + "' slot " + std::to_string(*e.slot) + " is taken twice");
      }
      g.shelves_[*e.shelf].push_back({*e.slot, e.id, e.model});
    }
  }
  for (auto& [shelf, slots] : g.shelves_) {
    std::sort(slots.begin(), slots.end(), [](const SlotEntry& a, const SlotEntry& b) { return a.slot < b.slot; });
  }

  g.successors_.resize(elements.size());
  std::set<Edge> seen_edges;
  for (const Edge& edge : edges) {
    if (!g.index_.count(edge.from) || !g.index_.count(edge.to)) {
      throw Error(Errc::DanglingEdge, "edge (" + edge.from + ", " + edge.to + ") references an unknown element");
    }
    if (edge.from == edge.to) throw Error(Errc::SelfLoop, "edge on '" + edge.from + "'");
    if (!seen_edges.insert(edge).second) continue;
    g.successors_[g.index_.at(edge.from)].push_back(edge.to);
    g.edges_.push_back(edge);
  }

  g.occurrences_.resize(elements.size());
  std::set<std::string> path_ids;
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const WavelengthPath& path = paths[p];
    if (!path_ids.insert(path.id).second) throw Error(Errc::DuplicateId, "path '" + path.id + "'");
    if (path.route.empty()) throw Error(Errc::BrokenRoute, "path '" + path.id + "' has an empty route");
    for (std::size_t k = 0; k < path.route.size(); ++k) {
      auto it = g.index_.find(path.route[k]);
      if (it == g.index_.end()) {
        throw Error(Errc::BrokenRoute, "path '" + path.id + "' visits unknown element '" + path.route[k] + "'");
      }
      g.occurrences_[it->second].push_back({p, k});
      if (k > 0 && !seen_edges.count(Edge{path.route[k - 1], path.route[k]})) {
        throw Error(Errc::BrokenRoute, "path '" + path.id + "' has no edge " + path.route[k - 1] + " -> " +
                                           path.route[k]);
      }
    }
    if (elements[g.index_.at(path.route.front())].kind != ElementKind::OT ||
        elements[g.index_.at(path.route.back())].kind != ElementKind::OT) {
      throw Error(Errc::BrokenRoute, "path '" + path.id + "' must start and end at an OT");
    }
  }

  for (const auto& [id, length] : fiber_lengths_km) {
    auto it = g.index_.find(id);
    if (it == g.index_.end()) throw Error(Errc::UnknownElement, "fiber length for unknown element '" + id + "'");
    if (elements[it->second].kind != ElementKind::FiberSpan) {
      throw Error(Errc::InvalidElement, "fiber length given for non-span element '" + id + "'");
    }
    if (!(length >= 0.0)) throw Error(Errc::InvalidElement, "negative fiber length for '" + id + "'");
  }
  for (const Element& e : elements) {
    if (e.kind == ElementKind::FiberSpan && !fiber_lengths_km.count(e.id)) {
      throw Error(Errc::MissingLength, "fiber span '" + e.id + "'");
    }
  }

  g.elements_ = std::move(elements);
  g.paths_ = std::move(paths);
  g.fiber_lengths_km_ = std::move(fiber_lengths_km);
  return g;
}

std::size_t TopologyGraph::index_of(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(Errc::UnknownElement, "'" + std::string(id) + "'");
  return it->second;
}

bool TopologyGraph::contains(std::string_view id) const { return index_.find(id) != index_.end(); }

const Element& TopologyGraph::element(std::string_view id) const { return elements_[index_of(id)]; }

const WavelengthPath& TopologyGraph::path(std::string_view id) const {
  for (const auto& p : paths_) {
    if (p.id == id) return p;
  }
  throw Error(Errc::UnknownPath, "'" + std::string(id) + "'");
}

const std::vector<std::string>& TopologyGraph::successors(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? kNoSuccessors : successors_[it->second];
}

const std::vector<PathPosition>& TopologyGraph::occurrences(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? kNoOccurrences : occurrences_[it->second];
}

std::vector<std::string> TopologyGraph::downstream(std::string_view element_id, std::string_view path_id) const {
  const WavelengthPath& p = path(path_id);
  auto it = std::find(p.route.begin(), p.route.end(), element_id);
  if (it == p.route.end()) {
    throw Error(Errc::NotOnPath, "'" + std::string(element_id) + "' is not on " + p.id);
  }
  return {std::next(it), p.route.end()};
}

ShelfArrangement TopologyGraph::arrangement_for(std::string_view shelf_id) const {
  auto it = shelves_.find(shelf_id);
  if (it == shelves_.end()) throw Error(Errc::UnknownShelf, "'" + std::string(shelf_id) + "'");
  return {it->first, it->second};
}

std::vector<std::string> TopologyGraph::shelf_ids() const {
  std::vector<std::string> ids;
  for (const auto& [id, _] : shelves_) ids.push_back(id);
  return ids;
}

double TopologyGraph::path_length_km(std::string_view path_id) const {
  double total = 0.0;
  for (const auto& id : path(path_id).route) {
    if (auto it = fiber_lengths_km_.find(id); it != fiber_lengths_km_.end()) total += it->second;
  }
  return total;
}

bool TopologyGraph::operator==(const TopologyGraph& other) const {
  return elements_ == other.elements_ && edges_ == other.edges_ && paths_ == other.paths_ &&
         fiber_lengths_km_ == other.fiber_lengths_km_;
}

}  // namespace twinops::topology
