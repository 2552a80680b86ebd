#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace twinops::topology {

enum class ElementKind { OT, LA, WSS, AA, MCS, FiberSpan };

std::string_view to_string(ElementKind kind);
/// Accepts the canonical names ("OT", ..., "FIBER_SPAN"); throws InvalidElement otherwise.
ElementKind parse_element_kind(std::string_view name);

struct Element {
  std::string id;
  ElementKind kind = ElementKind::OT;
  std::string model;
  std::string node;
  std::optional<std::string> shelf;
  std::optional<int> slot;

  bool operator==(const Element&) const = default;
};

struct WavelengthPath {
  std::string id;
  std::vector<std::string> route;
  double line_rate_gbps = 0.0;

  bool operator==(const WavelengthPath&) const = default;
};

struct Edge {
  std::string from;
  std::string to;

  auto operator<=>(const Edge&) const = default;
};

struct SlotEntry {
  int slot = 0;
  std::string element_id;
  std::string model;

  bool operator==(const SlotEntry&) const = default;
};

/// Left-to-right physical card order of one shelf.
struct ShelfArrangement {
  std::string shelf_id;
  std::vector<SlotEntry> slots;

  bool operator==(const ShelfArrangement&) const = default;
};

/// Where an element sits on a wavelength path.
struct PathPosition {
  std::size_t path_index = 0;
  std::size_t position = 0;
};

/// Directed card-level signal-flow graph. Immutable once built; share freely
/// between readers.
class TopologyGraph {
 public:
  TopologyGraph() = default;

  /// Validates and assembles a graph. Throws twinops::Error with DuplicateId,
  /// DanglingEdge, SelfLoop, BrokenRoute, MissingLength, InvalidElement or
  /// DuplicateSlot.
  static TopologyGraph build(std::vector<Element> elements, std::vector<Edge> edges,
                             std::vector<WavelengthPath> paths,
                             std::map<std::string, double> fiber_lengths_km);

  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<WavelengthPath>& paths() const { return paths_; }
  const std::map<std::string, double>& fiber_lengths_km() const { return fiber_lengths_km_; }

  bool contains(std::string_view id) const;
  /// Throws UnknownElement.
  const Element& element(std::string_view id) const;
  /// Throws UnknownPath.
  const WavelengthPath& path(std::string_view id) const;

  /// Signal-flow successors in edge insertion order.
  const std::vector<std::string>& successors(std::string_view id) const;
  /// Every (path, position) occurrence of an element, in path order.
  const std::vector<PathPosition>& occurrences(std::string_view id) const;

  /// Route suffix strictly after `element_id` on `path_id`. Throws NotOnPath.
  std::vector<std::string> downstream(std::string_view element_id, std::string_view path_id) const;

  /// Cards of a shelf ordered by slot index. Throws UnknownShelf.
  ShelfArrangement arrangement_for(std::string_view shelf_id) const;
  /// Distinct shelf ids in lexicographic order.
  std::vector<std::string> shelf_ids() const;

  /// Summed fiber length along a path's spans.
  double path_length_km(std::string_view path_id) const;

  bool operator==(const TopologyGraph& other) const;

 private:
  std::vector<Element> elements_;
  std::vector<Edge> edges_;
  std::vector<WavelengthPath> paths_;
  std::map<std::string, double> fiber_lengths_km_;

  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<std::vector<std::string>> successors_;
  std::vector<std::vector<PathPosition>> occurrences_;
  std::map<std::string, std::vector<SlotEntry>, std::less<>> shelves_;

  std::size_t index_of(std::string_view id) const;
};

}  // namespace twinops::topology
