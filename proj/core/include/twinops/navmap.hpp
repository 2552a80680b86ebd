#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace twinops::navmap {

struct Voxel {
  int ix = 0;
  int iy = 0;
  int iz = 0;

  auto operator<=>(const Voxel&) const = default;
};

struct Cell {
  int ix = 0;
  int iy = 0;

  auto operator<=>(const Cell&) const = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

/// Voxel occupancy map. Voxel (ix, iy, iz) spans
/// [origin + i*resolution, origin + (i+1)*resolution) on each axis.
struct OccupancyGrid3D {
  double resolution_m = 0.1;
  std::array<int, 3> dims{0, 0, 0};
  std::array<double, 3> origin_m{0.0, 0.0, 0.0};
  std::vector<Voxel> occupied;

  /// Throws InvalidArgument on non-positive resolution/dims or out-of-range voxels.
  void validate() const;
};

/// Top-view navigation grid, row-major (iy * nx + ix).
class Grid2D {
 public:
  Grid2D() = default;
  Grid2D(double resolution_m, int nx, int ny, Point2 origin_m = {});

  double resolution_m() const { return resolution_m_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  Point2 origin_m() const { return origin_m_; }

  bool in_bounds(Cell c) const { return c.ix >= 0 && c.iy >= 0 && c.ix < nx_ && c.iy < ny_; }
  bool blocked(Cell c) const { return blocked_[index(c)] != 0; }
  void set_blocked(Cell c, bool value = true) { blocked_[index(c)] = value ? 1 : 0; }
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.iy) * nx_ + c.ix; }

  /// Blocked cells in row-major order.
  std::vector<Cell> blocked_cells() const;

  /// World position of a cell centre.
  Point2 center_of(Cell c) const;
  /// Cell containing a world position. Throws OutOfBounds.
  Cell cell_at(Point2 p) const;

  bool operator==(const Grid2D&) const = default;

 private:
  double resolution_m_ = 1.0;
  int nx_ = 0;
  int ny_ = 0;
  Point2 origin_m_{};
  std::vector<std::uint8_t> blocked_;
};

/// Marks cells covered by any occupied voxel whose lower face lies in
/// [z_min_m, z_max_m]. Throws InvalidArgument when z_min_m >= z_max_m and
/// EmptySlab when no voxel layer falls inside the slab.
Grid2D project_2d(const OccupancyGrid3D& grid, double z_min_m, double z_max_m);

/// Path cost a + b*sqrt(2), kept exact so optimality comparisons are exact.
struct OctileCost {
  std::int64_t axial = 0;
  std::int64_t diagonal = 0;

  double value() const { return static_cast<double>(axial) + static_cast<double>(diagonal) * std::sqrt(2.0); }
  OctileCost operator+(const OctileCost& o) const { return {axial + o.axial, diagonal + o.diagonal}; }
  bool operator==(const OctileCost&) const = default;
  std::strong_ordering operator<=>(const OctileCost& o) const;
};

/// Admissible, consistent 8-connected heuristic.
OctileCost octile_distance(Cell a, Cell b);

enum class DiagonalRule {
  NoCornerCutting,  // diagonal forbidden if either orthogonal neighbour is blocked
  NoSqueeze,        // diagonal forbidden only if both orthogonal neighbours are blocked
};

struct GridPath {
  std::vector<Cell> cells;
  OctileCost cost;
};

/// Minimum-cost 8-connected path. Ties: lower f, then lower h, then row-major
/// cell order. Throws OutOfBounds, BlockedEndpoint or NoPath.
GridPath astar(const Grid2D& grid, Cell start, Cell goal, DiagonalRule rule = DiagonalRule::NoCornerCutting);

/// True when a step between two adjacent cells is legal under `rule`.
bool step_allowed(const Grid2D& grid, Cell from, Cell to, DiagonalRule rule);

struct Arrow {
  Point2 position_m;
  double heading_rad = 0.0;
};

/// Arrows at arc-length multiples of `spacing_m` along the cell-centre
/// polyline; the first sits on the start cell. Throws InvalidArgument on an
/// empty path or non-positive spacing.
std::vector<Arrow> decimate(std::span<const Cell> path, const Grid2D& grid, double spacing_m);

struct Flag {
  Point2 position_m;
  double height_m = 0.0;
};

struct FlagHeights {
  double lower_m = 0.6;
  double upper_m = 1.5;
};

/// Throws InvalidShelfLevel unless shelf_level is 0 (lower) or 1 (upper).
Flag flag_for(Cell goal, const Grid2D& grid, int shelf_level, const FlagHeights& heights = {});

struct NavPath {
  std::vector<Cell> cells;
  OctileCost cost;
  std::vector<Arrow> arrows;
  Flag flag;
};

struct NavOptions {
  double arrow_spacing_m = 1.0;
  FlagHeights flag_heights;
  DiagonalRule diagonal_rule = DiagonalRule::NoCornerCutting;
};

/// astar + decimate + flag_for in one call.
NavPath plan_route(const Grid2D& grid, Cell start, Cell goal, int shelf_level, const NavOptions& options = {});

}  // namespace twinops::navmap
