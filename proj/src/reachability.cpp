#include "pushsort/reachability.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "pushsort/errors.hpp"

namespace pushsort {

ConvexMap::ConvexMap(ConvexPolygon region) : region_(std::move(region)) {}

bool ConvexMap::reach(Vec2 p) const { return region_.contains(p); }

std::pair<Vec2, Vec2> ConvexMap::bounds() const { return region_.bounding_box(); }

double ConvexMap::traj(Vec2 a, Vec2 b) const {
  if (!reach(a) || !reach(b)) {
    throw QueryError("trajectory endpoint outside the reachable set");
  }
  return dist(a, b);  // convex set, straight segment
}

std::pair<double, double> ConvexMap::range(Vec2 p, const Direction& dir) const {
  if (!reach(p)) throw QueryError("range origin outside the reachable set");
  auto span = line_clip(p, dir, region_);
  if (!span) return {0.0, 0.0};  // boundary grazing, containment was by tolerance
  return {std::min(span->first, 0.0), std::max(span->second, 0.0)};
}

GridMap::GridMap(Vec2 origin, double cell, int nx, int ny, std::vector<char> free)
    : origin_(origin), cell_(cell), nx_(nx), ny_(ny), free_(std::move(free)) {
  if (cell <= 0.0 || nx < 1 || ny < 1) {
    throw StructuralError("grid map needs positive cell size and extents");
  }
  if (free_.size() != static_cast<size_t>(nx) * static_cast<size_t>(ny)) {
    throw StructuralError("grid map occupancy has " + std::to_string(free_.size()) +
                          " cells, expected " + std::to_string(static_cast<size_t>(nx) * ny));
  }
}

int GridMap::cell_index(Vec2 p) const {
  int ix = static_cast<int>(std::floor((p.x - origin_.x) / cell_));
  int iy = static_cast<int>(std::floor((p.y - origin_.y) / cell_));
  if (ix < 0 || ix >= nx_ || iy < 0 || iy >= ny_) return -1;
  return iy * nx_ + ix;
}

bool GridMap::reach(Vec2 p) const {
  int c = cell_index(p);
  return c >= 0 && free_[c];
}

std::pair<Vec2, Vec2> GridMap::bounds() const {
  return {origin_, origin_ + Vec2{nx_ * cell_, ny_ * cell_}};
}

double GridMap::traj(Vec2 a, Vec2 b) const {
  if (!reach(a) || !reach(b)) {
    throw QueryError("trajectory endpoint outside the reachable set");
  }
  int start = cell_index(a);
  int goal = cell_index(b);
  if (start == goal) return 0.0;
  std::vector<int> hops(free_.size(), -1);
  std::deque<int> queue{start};
  hops[start] = 0;
  while (!queue.empty()) {
    int c = queue.front();
    queue.pop_front();
    if (c == goal) return hops[c] * cell_;
    int cx = c % nx_, cy = c / nx_;
    const int next[4] = {cx + 1 < nx_ ? c + 1 : -1, cx > 0 ? c - 1 : -1,
                         cy + 1 < ny_ ? c + nx_ : -1, cy > 0 ? c - nx_ : -1};
    for (int nb : next) {
      if (nb >= 0 && free_[nb] && hops[nb] < 0) {
        hops[nb] = hops[c] + 1;
        queue.push_back(nb);
      }
    }
  }
  throw QueryError("trajectory endpoints lie in disconnected reachable parts");
}

std::pair<double, double> GridMap::range(Vec2 p, const Direction& dir) const {
  if (!reach(p)) throw QueryError("range origin outside the reachable set");
  // March until the ray leaves the free cells, then pin the frontier down by
  // bisection. The whole grid diagonal bounds how far any ray can stay free.
  double limit = cell_ * std::hypot(static_cast<double>(nx_), static_cast<double>(ny_)) + cell_;
  double step = cell_ / 8.0;
  auto frontier = [&](double sign) {
    double good = 0.0;
    double bad = std::numeric_limits<double>::quiet_NaN();
    for (double t = step; t <= limit; t += step) {
      if (reach(p + dir.vec() * (sign * t))) {
        good = t;
      } else {
        bad = t;
        break;
      }
    }
    if (std::isnan(bad)) return sign * good;  // never left the grid's free set
    while (bad - good > 1e-7) {
      double mid = 0.5 * (good + bad);
      (reach(p + dir.vec() * (sign * mid)) ? good : bad) = mid;
    }
    return sign * good;
  };
  return {frontier(-1.0), frontier(1.0)};
}

}  // namespace pushsort
