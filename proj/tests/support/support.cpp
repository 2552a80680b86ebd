#include "support.hpp"

#include <algorithm>
#include <queue>

namespace twinops::testsupport {

std::filesystem::path source_dir() { return TWINOPS_SOURCE_DIR; }

std::filesystem::path reference_scenario_path() { return source_dir() / "scenarios" / "reference.json"; }

const Scenario& reference_scenario() {
  static const Scenario s = load_scenario(reference_scenario_path());
  return s;
}

// ---- topology / localization ----

topology::TopologyGraph random_topology(Rng& rng, int max_elements, int max_paths) {
  using topology::ElementKind;
  std::vector<topology::Element> elements;
  std::vector<topology::Edge> edges;
  std::vector<topology::WavelengthPath> paths;
  std::map<std::string, double> lengths;
  std::vector<std::string> shared;  // intermediate elements available for reuse

  int next_id = 0;
  int next_slot = 0;
  auto make = [&](ElementKind kind) {
    topology::Element e;
    e.kind = kind;
    e.id = "E" + std::to_string(next_id++) + "/" + std::string(topology::to_string(kind));
    e.node = "N" + std::to_string(next_id % 6);
    e.model = "M-" + std::string(topology::to_string(kind));
    if (kind == ElementKind::FiberSpan) {
      lengths[e.id] = std::uniform_real_distribution<double>(1.0, 80.0)(rng);
    } else {
      e.shelf = "SH" + std::to_string(next_slot / 16);
      e.slot = next_slot % 16;
      ++next_slot;
    }
    elements.push_back(e);
    return e.id;
  };

  static constexpr ElementKind kMiddle[] = {ElementKind::LA, ElementKind::WSS, ElementKind::AA, ElementKind::MCS,
                                            ElementKind::FiberSpan};
  const int n_paths = std::uniform_int_distribution<int>(1, max_paths)(rng);
  for (int p = 0; p < n_paths; ++p) {
    const int budget = max_elements - static_cast<int>(elements.size());
    if (budget < 2) break;
    const int middle = std::uniform_int_distribution<int>(0, std::min(10, budget - 2))(rng);
    std::vector<std::string> route{make(ElementKind::OT)};
    for (int k = 0; k < middle; ++k) {
      std::vector<std::string> reusable;
      for (const auto& id : shared) {
        if (std::find(route.begin(), route.end(), id) == route.end()) reusable.push_back(id);
      }
      const bool room_left = static_cast<int>(elements.size()) < max_elements - 1;
      const bool reuse = !reusable.empty() && (!room_left || std::bernoulli_distribution(0.3)(rng));
      if (reuse) {
        route.push_back(reusable[std::uniform_int_distribution<std::size_t>(0, reusable.size() - 1)(rng)]);
      } else if (room_left) {
        const auto kind = kMiddle[std::uniform_int_distribution<int>(0, 4)(rng)];
        route.push_back(make(kind));
        shared.push_back(route.back());
      }
    }
    route.push_back(make(ElementKind::OT));
    for (std::size_t i = 0; i + 1 < route.size(); ++i) edges.push_back({route[i], route[i + 1]});
    paths.push_back({"WL" + std::to_string(p + 1), route, 100.0});
  }
  return topology::TopologyGraph::build(std::move(elements), std::move(edges), std::move(paths), std::move(lengths));
}

std::vector<std::string> on_path_elements(const topology::TopologyGraph& graph) {
  std::set<std::string> seen;
  for (const auto& p : graph.paths()) seen.insert(p.route.begin(), p.route.end());
  return {seen.begin(), seen.end()};
}

std::map<std::string, double> coverage_scores(const topology::TopologyGraph& graph,
                                              const std::vector<faultloc::Alarm>& alarms) {
  std::map<std::string, faultloc::Severity> worst;
  for (const auto& a : alarms) {
    auto [it, fresh] = worst.emplace(a.element_id, a.severity);
    if (!fresh && a.severity > it->second) it->second = a.severity;
  }
  auto weight = [](faultloc::Severity s) {
    switch (s) {
      case faultloc::Severity::Critical: return 1.0;
      case faultloc::Severity::Major: return 0.75;
      case faultloc::Severity::Minor: return 0.5;
      default: return 0.25;
    }
  };
  std::map<std::string, double> scores;
  for (const auto& [e, sev] : worst) {
    std::set<std::string> closure{e};
    for (const auto& p : graph.paths()) {
      bool after = false;
      for (const auto& id : p.route) {
        if (after) closure.insert(id);
        if (id == e) after = true;
      }
    }
    std::size_t covered = 0;
    for (const auto& id : closure) covered += worst.count(id);
    scores[e] = static_cast<double>(covered) / static_cast<double>(worst.size()) * weight(sev);
  }
  return scores;
}

std::set<std::string> coverage_argmax(const topology::TopologyGraph& graph, const std::vector<faultloc::Alarm>& alarms) {
  const auto scores = coverage_scores(graph, alarms);
  double best = -1.0;
  for (const auto& [_, s] : scores) best = std::max(best, s);
  std::set<std::string> out;
  for (const auto& [e, s] : scores) {
    if (std::abs(s - best) < 1e-12) out.insert(e);
  }
  return out;
}

std::vector<std::pair<std::string, faultloc::Severity>> expected_cascade(const topology::TopologyGraph& graph,
                                                                         const std::string& fault) {
  std::vector<std::pair<std::string, faultloc::Severity>> out{{fault, faultloc::Severity::Critical}};
  std::set<std::string> emitted{fault};
  for (const auto& p : graph.paths()) {
    auto it = std::find(p.route.begin(), p.route.end(), fault);
    if (it == p.route.end()) continue;
    for (++it; it != p.route.end(); ++it) {
      if (graph.element(*it).kind == topology::ElementKind::FiberSpan) continue;
      if (emitted.insert(*it).second) out.emplace_back(*it, faultloc::Severity::Major);
    }
  }
  return out;
}

// ---- navigation ----

int compare(const Surd& x, const Surd& y) {
  const std::int64_t da = x.a - y.a;
  const std::int64_t db = x.b - y.b;
  auto sign = [](std::int64_t v) { return (v > 0) - (v < 0); };
  if (da >= 0 && db >= 0) return sign(da + db);
  if (da <= 0 && db <= 0) return sign(da + db);
  // Opposite signs: compare da against -db*sqrt(2) via squares.
  const std::int64_t lhs = da * da;
  const std::int64_t rhs = 2 * db * db;
  return da > 0 ? sign(lhs - rhs) : sign(rhs - lhs);
}

navmap::Grid2D random_grid(Rng& rng, int nx, int ny, double blocked_fraction) {
  navmap::Grid2D grid(1.0, nx, ny);
  std::bernoulli_distribution blocked(blocked_fraction);
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      if (blocked(rng)) grid.set_blocked({x, y});
    }
  }
  return grid;
}

std::optional<Surd> dijkstra_cost(const navmap::Grid2D& grid, navmap::Cell start, navmap::Cell goal, bool strict) {
  const int nx = grid.nx();
  const int ny = grid.ny();
  auto free = [&](int x, int y) { return x >= 0 && y >= 0 && x < nx && y < ny && !grid.blocked({x, y}); };
  if (!free(start.ix, start.iy) || !free(goal.ix, goal.iy)) return std::nullopt;

  std::vector<std::optional<Surd>> dist(static_cast<std::size_t>(nx) * ny);
  std::vector<bool> done(dist.size(), false);
  auto idx = [&](int x, int y) { return static_cast<std::size_t>(y) * nx + x; };
  struct Item {
    Surd d;
    int x, y;
  };
  auto worse = [](const Item& l, const Item& r) { return compare(l.d, r.d) > 0; };
  std::priority_queue<Item, std::vector<Item>, decltype(worse)> open(worse);
  dist[idx(start.ix, start.iy)] = Surd{};
  open.push({Surd{}, start.ix, start.iy});
  while (!open.empty()) {
    const Item cur = open.top();
    open.pop();
    if (done[idx(cur.x, cur.y)]) continue;
    done[idx(cur.x, cur.y)] = true;
    if (cur.x == goal.ix && cur.y == goal.iy) return cur.d;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const int x = cur.x + dx;
        const int y = cur.y + dy;
        if (!free(x, y)) continue;
        Surd step{1, 0};
        if (dx != 0 && dy != 0) {
          const bool a = free(cur.x + dx, cur.y);
          const bool b = free(cur.x, cur.y + dy);
          if (strict ? (!a || !b) : (!a && !b)) continue;
          step = {0, 1};
        }
        const Surd nd{cur.d.a + step.a, cur.d.b + step.b};
        auto& slot = dist[idx(x, y)];
        if (!slot || compare(nd, *slot) < 0) {
          slot = nd;
          open.push({nd, x, y});
        }
      }
    }
  }
  return std::nullopt;
}

// ---- card identification ----

cardid::SyntheticLayout random_layout(Rng& rng, const std::string& id, int max_slots, int max_duplicates) {
  const int n = std::uniform_int_distribution<int>(1, max_slots)(rng);
  const int n_models = std::uniform_int_distribution<int>(1, 8)(rng);
  std::map<std::string, int> used;
  topology::ShelfArrangement shelf;
  shelf.shelf_id = id + "/S1";
  int slot = std::uniform_int_distribution<int>(0, 2)(rng);
  for (int i = 0; i < n; ++i) {
    std::string model;
    do {
      model = "MODEL-" + std::to_string(std::uniform_int_distribution<int>(0, n_models - 1)(rng));
      if (used[model] >= max_duplicates) model = "MODEL-U" + std::to_string(i);
    } while (used[model] >= max_duplicates);
    ++used[model];
    shelf.slots.push_back({slot, id + "/E" + std::to_string(i), model});
    slot += std::uniform_int_distribution<int>(1, 2)(rng);
  }
  cardid::SyntheticLayout layout;
  layout.id = id;
  layout.slots_per_shelf = slot + std::uniform_int_distribution<int>(0, 3)(rng);
  layout.jitter_sigma = 0.0;
  layout.shelves.push_back(std::move(shelf));
  return layout;
}

// ---- collaboration ----

void Replica::apply(const Json& m) {
  const auto kind = m.value("kind", std::string{});
  if (kind == "collab_join_response") {
    objects.clear();
    for (const auto& o : m.at("payload").at("objects")) {
      auto s = o.get<edged::CollabObjectState>();
      objects[s.object_id] = s;
    }
    strokes = m.at("payload").at("strokes").get<std::vector<edged::Stroke>>();
  } else if (kind == "pose_update_response") {
    auto s = m.at("payload").at("state").get<edged::CollabObjectState>();
    objects[s.object_id] = s;
  } else if (kind == "stroke_add_response") {
    strokes.push_back(m.at("payload").at("stroke").get<edged::Stroke>());
  } else if (kind == "event") {
    const auto ev = m.at("event").get<std::string>();
    if (ev == "pose") {
      auto s = m.at("payload").get<edged::CollabObjectState>();
      objects[s.object_id] = s;
    } else if (ev == "stroke") {
      strokes.push_back(m.at("payload").get<edged::Stroke>());
    }
  }
}

std::string Replica::objects_bytes() const {
  Json j = Json::array();
  for (const auto& [_, s] : objects) j.push_back(s);
  return j.dump();
}

}  // namespace twinops::testsupport
