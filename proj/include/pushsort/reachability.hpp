#pragma once

#include <utility>
#include <vector>

#include "pushsort/geometry.hpp"

namespace pushsort {

// Workspace the gripper can occupy. Planners stay agnostic of the concrete
// representation; both implementations answer the same three queries.
class ReachabilityMap {
 public:
  virtual ~ReachabilityMap() = default;

  virtual bool reach(Vec2 p) const = 0;

  // Axis-aligned bounding box of the reachable set (may be loose).
  virtual std::pair<Vec2, Vec2> bounds() const = 0;

  // Length of the shortest gripper path between two reachable points.
  // Throws QueryError when either endpoint is out of reach or no path exists.
  virtual double traj(Vec2 a, Vec2 b) const = 0;

  // Maximal interval [lo, hi] with lo <= 0 <= hi such that p + t*dir stays
  // reachable for every t inside it. Throws QueryError when p itself is not.
  virtual std::pair<double, double> range(Vec2 p, const Direction& dir) const = 0;
};

// Reachable set given by a single convex polygon. Queries are exact.
class ConvexMap : public ReachabilityMap {
 public:
  explicit ConvexMap(ConvexPolygon region);

  bool reach(Vec2 p) const override;
  std::pair<Vec2, Vec2> bounds() const override;
  double traj(Vec2 a, Vec2 b) const override;
  std::pair<double, double> range(Vec2 p, const Direction& dir) const override;

  const ConvexPolygon& region() const { return region_; }

 private:
  ConvexPolygon region_;
};

// Reachable set given by a boolean occupancy grid: cell (ix, iy) covers
// [origin + ix*cell, origin + (ix+1)*cell) x [... iy ...), and a point belongs
// to the cell its coordinates floor into. traj walks 4-connected cells and
// reports hops * cell; range marches along the ray and refines the frontier
// by bisection, so free slivers thinner than the marching step (cell/8) can
// be skipped over.
class GridMap : public ReachabilityMap {
 public:
  GridMap(Vec2 origin, double cell, int nx, int ny, std::vector<char> free);

  bool reach(Vec2 p) const override;
  std::pair<Vec2, Vec2> bounds() const override;
  double traj(Vec2 a, Vec2 b) const override;
  std::pair<double, double> range(Vec2 p, const Direction& dir) const override;

 private:
  int cell_index(Vec2 p) const;  // -1 when outside the grid

  Vec2 origin_;
  double cell_;
  int nx_, ny_;
  std::vector<char> free_;
};

}  // namespace pushsort
