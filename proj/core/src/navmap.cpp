#include "twinops/navmap.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <string>
#include <tuple>

#include "twinops/error.hpp"

namespace twinops::navmap {

namespace {

constexpr double kLayerEps = 1e-9;

std::string to_string(Cell c) { return "(" + std::to_string(c.ix) + ", " + std::to_string(c.iy) + ")"; }

}  // namespace

void OccupancyGrid3D::validate() const {
  if (!(resolution_m > 0.0)) throw Error(Errc::InvalidArgument, "voxel resolution must be positive");
  for (int d : dims) {
    if (d <= 0) throw Error(Errc::InvalidArgument, "voxel dims must be positive");
  }
  for (const auto& v : occupied) {
    if (v.ix < 0 || v.iy < 0 || v.iz < 0 || v.ix >= dims[0] || v.iy >= dims[1] || v.iz >= dims[2]) {
      throw Error(Errc::InvalidArgument, "occupied voxel outside map dims");
    }
  }
}

Grid2D::Grid2D(double resolution_m, int nx, int ny, Point2 origin_m)
    : resolution_m_(resolution_m), nx_(nx), ny_(ny), origin_m_(origin_m) {
  if (!(resolution_m > 0.0) || nx <= 0 || ny <= 0) {
    throw Error(Errc::InvalidArgument, "grid needs positive resolution and dims");
  }
  blocked_.assign(static_cast<std::size_t>(nx) * ny, 0);
}

std::vector<Cell> Grid2D::blocked_cells() const {
  std::vector<Cell> out;
  for (int iy = 0; iy < ny_; ++iy) {
    for (int ix = 0; ix < nx_; ++ix) {
      if (blocked({ix, iy})) out.push_back({ix, iy});
    }
  }
  return out;
}

Point2 Grid2D::center_of(Cell c) const {
  return {origin_m_.x + (c.ix + 0.5) * resolution_m_, origin_m_.y + (c.iy + 0.5) * resolution_m_};
}

Cell Grid2D::cell_at(Point2 p) const {
  const Cell c{static_cast<int>(std::floor((p.x - origin_m_.x) / resolution_m_)),
               static_cast<int>(std::floor((p.y - origin_m_.y) / resolution_m_))};
  if (!in_bounds(c)) throw Error(Errc::OutOfBounds, "world point maps outside the grid");
  return c;
}

Grid2D project_2d(const OccupancyGrid3D& grid, double z_min_m, double z_max_m) {
  if (!(z_min_m < z_max_m)) throw Error(Errc::InvalidArgument, "slab needs z_min < z_max");
  grid.validate();
  const double res = grid.resolution_m;
  const double oz = grid.origin_m[2];
  const int first = std::max(0, static_cast<int>(std::ceil((z_min_m - oz) / res - kLayerEps)));
  const int last = std::min(grid.dims[2] - 1, static_cast<int>(std::floor((z_max_m - oz) / res + kLayerEps)));
  if (first > last) throw Error(Errc::EmptySlab, "slab intersects no voxel layer");

  Grid2D out(res, grid.dims[0], grid.dims[1], {grid.origin_m[0], grid.origin_m[1]});
  for (const auto& v : grid.occupied) {
    if (v.iz >= first && v.iz <= last) out.set_blocked({v.ix, v.iy});
  }
  return out;
}

std::strong_ordering OctileCost::operator<=>(const OctileCost& o) const {
  // Compare da against db*sqrt(2) without floating point.
  const std::int64_t da = axial - o.axial;
  const std::int64_t db = o.diagonal - diagonal;
  if (da == 0 && db == 0) return std::strong_ordering::equal;
  if (da >= 0 && db <= 0) return std::strong_ordering::greater;
  if (da <= 0 && db >= 0) return std::strong_ordering::less;
  const std::int64_t lhs = da * da;
  const std::int64_t rhs = 2 * db * db;
  if (da > 0) return lhs > rhs ? std::strong_ordering::greater : std::strong_ordering::less;
  return lhs > rhs ? std::strong_ordering::less : std::strong_ordering::greater;
}

OctileCost octile_distance(Cell a, Cell b) {
  const std::int64_t dx = std::abs(a.ix - b.ix);
  const std::int64_t dy = std::abs(a.iy - b.iy);
  return {std::max(dx, dy) - std::min(dx, dy), std::min(dx, dy)};
}

bool step_allowed(const Grid2D& grid, Cell from, Cell to, DiagonalRule rule) {
  if (!grid.in_bounds(to) || grid.blocked(to)) return false;
  const int dx = to.ix - from.ix;
  const int dy = to.iy - from.iy;
  if (std::max(std::abs(dx), std::abs(dy)) != 1) return false;
  if (dx == 0 || dy == 0) return true;
  const bool side_a = grid.blocked({from.ix + dx, from.iy});
  const bool side_b = grid.blocked({from.ix, from.iy + dy});
  return rule == DiagonalRule::NoCornerCutting ? !(side_a || side_b) : !(side_a && side_b);
}

GridPath astar(const Grid2D& grid, Cell start, Cell goal, DiagonalRule rule) {
  if (!grid.in_bounds(start) || !grid.in_bounds(goal)) {
    throw Error(Errc::OutOfBounds, "endpoint " + to_string(grid.in_bounds(start) ? goal : start));
  }
  if (grid.blocked(start) || grid.blocked(goal)) {
    throw Error(Errc::BlockedEndpoint, "endpoint " + to_string(grid.blocked(start) ? start : goal));
  }

  struct OpenEntry {
    OctileCost f;
    OctileCost h;
    std::size_t index;
    OctileCost g;
  };
  auto worse = [](const OpenEntry& a, const OpenEntry& b) {
    return std::tie(a.f, a.h, a.index) > std::tie(b.f, b.h, b.index);
  };
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, decltype(worse)> open(worse);

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  const std::size_t n = static_cast<std::size_t>(grid.nx()) * grid.ny();
  std::vector<OctileCost> best_g(n);
  std::vector<bool> reached(n, false);
  std::vector<bool> closed(n, false);
  std::vector<std::size_t> parent(n, kNone);

  auto cell_of = [&](std::size_t i) { return Cell{static_cast<int>(i % grid.nx()), static_cast<int>(i / grid.nx())}; };

  const std::size_t s = grid.index(start);
  const std::size_t t = grid.index(goal);
  reached[s] = true;
  const OctileCost h0 = octile_distance(start, goal);
  open.push({h0, h0, s, {}});

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    if (closed[top.index] || top.g != best_g[top.index]) continue;
    closed[top.index] = true;
    if (top.index == t) break;

    const Cell here = cell_of(top.index);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const Cell next{here.ix + dx, here.iy + dy};
        if (!step_allowed(grid, here, next, rule)) continue;
        const std::size_t j = grid.index(next);
        if (closed[j]) continue;
        const OctileCost step = (dx != 0 && dy != 0) ? OctileCost{0, 1} : OctileCost{1, 0};
        const OctileCost g = top.g + step;
        if (reached[j] && !(g < best_g[j])) continue;
        reached[j] = true;
        best_g[j] = g;
        parent[j] = top.index;
        const OctileCost h = octile_distance(next, goal);
        open.push({g + h, h, j, g});
      }
    }
  }

  if (!closed[t]) throw Error(Errc::NoPath, to_string(start) + " -> " + to_string(goal));

  GridPath out;
  out.cost = best_g[t];
  for (std::size_t i = t; i != kNone; i = parent[i]) out.cells.push_back(cell_of(i));
  std::reverse(out.cells.begin(), out.cells.end());
  return out;
}

std::vector<Arrow> decimate(std::span<const Cell> path, const Grid2D& grid, double spacing_m) {
  if (path.empty()) throw Error(Errc::InvalidArgument, "cannot decimate an empty path");
  if (!(spacing_m > 0.0)) throw Error(Errc::InvalidArgument, "arrow spacing must be positive");

  std::vector<Point2> pts;
  pts.reserve(path.size());
  for (const auto& c : path) pts.push_back(grid.center_of(c));
  if (pts.size() == 1) return {{pts.front(), 0.0}};

  std::vector<double> cumulative{0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    cumulative.push_back(cumulative.back() + std::hypot(pts[i].x - pts[i - 1].x, pts[i].y - pts[i - 1].y));
  }
  const double length = cumulative.back();
  const auto count = static_cast<std::size_t>(std::floor(length / spacing_m + kLayerEps)) + 1;

  std::vector<Arrow> arrows;
  arrows.reserve(count);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double s = std::min(k * spacing_m, length);
    // An arrow exactly on a vertex takes the heading of the outgoing segment.
    while (seg + 2 < pts.size() && s >= cumulative[seg + 1] - kLayerEps) ++seg;
    const Point2& a = pts[seg];
    const Point2& b = pts[seg + 1];
    const double seg_len = cumulative[seg + 1] - cumulative[seg];
    const double u = std::clamp((s - cumulative[seg]) / seg_len, 0.0, 1.0);
    arrows.push_back({{a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)}, std::atan2(b.y - a.y, b.x - a.x)});
  }
  return arrows;
}

Flag flag_for(Cell goal, const Grid2D& grid, int shelf_level, const FlagHeights& heights) {
  if (shelf_level != 0 && shelf_level != 1) {
    throw Error(Errc::InvalidShelfLevel, "shelf level " + std::to_string(shelf_level) + " (racks hold two shelves)");
  }
  if (!grid.in_bounds(goal)) throw Error(Errc::OutOfBounds, "flag cell " + to_string(goal));
  return {grid.center_of(goal), shelf_level == 0 ? heights.lower_m : heights.upper_m};
}

NavPath plan_route(const Grid2D& grid, Cell start, Cell goal, int shelf_level, const NavOptions& options) {
  NavPath nav;
  nav.flag = flag_for(goal, grid, shelf_level, options.flag_heights);
  auto path = astar(grid, start, goal, options.diagonal_rule);
  nav.arrows = decimate(path.cells, grid, options.arrow_spacing_m);
  nav.cells = std::move(path.cells);
  nav.cost = path.cost;
  return nav;
}

}  // namespace twinops::navmap
