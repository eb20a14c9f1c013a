#pragma once

// Brute-force reference implementations shared by the test binaries. These
// deliberately avoid the library's solver paths: geometry by direct formula,
// assignment by exhaustive enumeration, the push model by support intervals
// and backward rays recomputed from scratch.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pushsort/scene.hpp"

namespace oracle {

using pushsort::ConvexPolygon;
using pushsort::SceneState;
using pushsort::Vec2;

constexpr double kInf = std::numeric_limits<double>::infinity();

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline int uniform_int(std::mt19937_64& g, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(g);
}

// Distinct jittered angles on a circle give a strictly convex CCW loop.
inline ConvexPolygon random_convex(std::mt19937_64& g, Vec2 center, double radius, int verts) {
  std::vector<Vec2> pts;
  const double slice = 2.0 * std::numbers::pi / verts;
  const double base = uniform(g, 0.0, slice);
  for (int i = 0; i < verts; ++i) {
    const double ang = base + slice * (i + uniform(g, -0.3, 0.3));
    pts.push_back(center + Vec2{radius * std::cos(ang), radius * std::sin(ang)});
  }
  return ConvexPolygon(pts);
}

inline ConvexPolygon square(Vec2 center, double side) {
  const double h = side / 2.0;
  return ConvexPolygon::axis_aligned_box({center.x - h, center.y - h},
                                         {center.x + h, center.y + h});
}

inline double point_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  double s = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return (p - (a + ab * s)).norm();
}

inline bool inside_convex(Vec2 p, const ConvexPolygon& poly) {
  const int n = poly.size();
  for (int i = 0; i < n; ++i) {
    const Vec2 a = poly.vertex(i);
    const Vec2 b = poly.vertex((i + 1) % n);
    if ((b - a).cross(p - a) < 0.0) return false;
  }
  return true;
}

inline double point_polygon(Vec2 p, const ConvexPolygon& poly) {
  if (inside_convex(p, poly)) return 0.0;
  double best = kInf;
  const int n = poly.size();
  for (int i = 0; i < n; ++i) {
    best = std::min(best, point_segment(p, poly.vertex(i), poly.vertex((i + 1) % n)));
  }
  return best;
}

inline std::pair<double, double> project(const ConvexPolygon& poly, Vec2 axis) {
  double lo = kInf, hi = -kInf;
  for (Vec2 v : poly.vertices()) {
    const double s = axis.dot(v);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return {lo, hi};
}

// Least overlap across the edge normals of both polygons (negative = gap).
inline double sat_depth(const ConvexPolygon& a, const ConvexPolygon& b) {
  double best = kInf;
  auto consider = [&](const ConvexPolygon& owner) {
    const int n = owner.size();
    for (int i = 0; i < n; ++i) {
      const Vec2 e = owner.vertex((i + 1) % n) - owner.vertex(i);
      Vec2 axis{-e.y, e.x};
      const double len = axis.norm();
      if (len <= 0.0) continue;
      axis = axis * (1.0 / len);
      const auto [alo, ahi] = project(a, axis);
      const auto [blo, bhi] = project(b, axis);
      best = std::min(best, std::min(ahi, bhi) - std::max(alo, blo));
    }
  };
  consider(a);
  consider(b);
  return best;
}

inline bool sat_overlap(const ConvexPolygon& a, const ConvexPolygon& b, double tol = 1e-9) {
  return sat_depth(a, b) > tol;
}

// Ray against a convex polygon by clipping the parameter line against each
// edge half-plane. Smallest t >= 0, zero when the origin is inside.
inline std::optional<double> ray_polygon(Vec2 origin, Vec2 dir, const ConvexPolygon& poly) {
  double tlo = -kInf, thi = kInf;
  const int n = poly.size();
  for (int i = 0; i < n; ++i) {
    const Vec2 a = poly.vertex(i);
    const Vec2 e = poly.vertex((i + 1) % n) - a;
    const double denom = e.cross(dir);
    const double num = e.cross(origin - a);
    if (std::abs(denom) < 1e-15) {
      if (num < 0.0) return std::nullopt;
      continue;
    }
    const double t = -num / denom;
    if (denom > 0.0) {
      tlo = std::max(tlo, t);
    } else {
      thi = std::min(thi, t);
    }
  }
  if (tlo > thi || thi < 0.0) return std::nullopt;
  return std::max(tlo, 0.0);
}

// Exhaustive transportation minimum; nullopt when the capacities cannot
// absorb every item.
inline void transport_rec(const std::vector<std::vector<double>>& costs, std::vector<int>& caps,
                          std::size_t item, double acc, double& best) {
  if (acc >= best) return;
  if (item == costs.size()) {
    best = acc;
    return;
  }
  for (std::size_t j = 0; j < caps.size(); ++j) {
    if (caps[j] <= 0) continue;
    --caps[j];
    transport_rec(costs, caps, item + 1, acc + costs[item][j], best);
    ++caps[j];
  }
}

inline std::optional<double> transport_min(const std::vector<std::vector<double>>& costs,
                                           std::vector<int> caps) {
  double best = kInf;
  transport_rec(costs, caps, 0, 0.0, best);
  if (best == kInf) return std::nullopt;
  return best;
}

// Scene cost by exhaustive per-category assignment.
inline std::optional<double> scene_cost(const SceneState& state) {
  double total = 0.0;
  for (int k = 0; k < state.num_categories; ++k) {
    std::vector<std::vector<double>> costs;
    for (const pushsort::ObjectState& obj : state.objects) {
      if (obj.label != k) continue;
      std::vector<double> row;
      for (const pushsort::TargetRegion& region : state.regions) {
        row.push_back(point_polygon(obj.center, region.polygon));
      }
      costs.push_back(std::move(row));
    }
    if (costs.empty()) continue;
    std::vector<int> caps;
    for (const pushsort::TargetRegion& region : state.regions) caps.push_back(region.capacities[k]);
    const std::optional<double> got = transport_min(costs, caps);
    if (!got) return std::nullopt;
    total += *got;
  }
  return total;
}

// Push-model quantities for one direction, recomputed from supports.
struct PushFrame {
  Vec2 dir, perp;
  std::vector<double> smin, smax, tmin, tmax;

  PushFrame(const SceneState& state, Vec2 d) : dir(d), perp(d.perp()) {
    for (const pushsort::ObjectState& obj : state.objects) {
      const auto [slo, shi] = project(obj.shape, dir);
      const auto [tlo, thi] = project(obj.shape, perp);
      smin.push_back(slo);
      smax.push_back(shi);
      tmin.push_back(tlo);
      tmax.push_back(thi);
    }
  }

  // Affected set for an anchor, or nullopt when a strip member overlaps or
  // trails into the pusher body.
  std::optional<std::vector<int>> affected_at(double alpha, double beta, double width,
                                              double thickness) const {
    std::vector<int> out;
    const double half = width / 2.0;
    for (std::size_t i = 0; i < smin.size(); ++i) {
      if (tmin[i] < beta - half || tmax[i] > beta + half) continue;  // boundary or outside
      if (smin[i] >= alpha) {
        out.push_back(static_cast<int>(i));
      } else if (smax[i] > alpha - thickness) {
        return std::nullopt;
      }
    }
    if (out.empty()) return std::nullopt;
    return out;
  }
};

// Compression distances by backward rays from every vertex; a ray whose first
// hit is not affected contributes nothing.
inline std::vector<double> compression(const SceneState& state, const PushFrame& f, double alpha,
                                       const std::vector<int>& affected) {
  std::vector<double> memo(state.objects.size(), -1.0);
  std::vector<char> open(state.objects.size(), 0);
  auto is_affected = [&](int j) {
    return std::find(affected.begin(), affected.end(), j) != affected.end();
  };
  std::function<double(int)> solve = [&](int i) -> double {
    if (memo[i] >= 0.0) return memo[i];
    if (open[i]) throw std::runtime_error("cyclic blocking chain in the test oracle");
    open[i] = 1;
    double d = f.smin[i] - alpha;
    for (Vec2 v : state.objects[i].shape.vertices()) {
      int hit = -1;
      double gap = kInf;
      for (std::size_t j = 0; j < state.objects.size(); ++j) {
        if (static_cast<int>(j) == i) continue;
        const std::optional<double> t = ray_polygon(v, f.dir * -1.0, state.objects[j].shape);
        if (t && *t < gap) {
          gap = *t;
          hit = static_cast<int>(j);
        }
      }
      if (hit < 0 || !is_affected(hit)) continue;
      // zero-gap touches transmit only from strictly deeper fronts, so
      // side-by-side contact never forms a cycle
      if (gap <= 1e-9 && f.smin[hit] >= f.smin[i] - 1e-9) continue;
      d = std::min(d, gap + solve(hit));
    }
    open[i] = 0;
    return memo[i] = d;
  };
  std::vector<double> out;
  out.reserve(affected.size());
  for (int i : affected) out.push_back(solve(i));
  return out;
}

// Total fixed-assignment cost once the pusher face reaches coordinate s.
// contact_s[k] is the face coordinate at which affected[k] starts to move.
inline double pushed_cost(const SceneState& state, const std::vector<int>& region_of,
                          const PushFrame& f, const std::vector<int>& affected,
                          const std::vector<double>& contact_s, double s) {
  double total = 0.0;
  for (std::size_t i = 0; i < state.objects.size(); ++i) {
    Vec2 c = state.objects[i].center;
    const auto it = std::find(affected.begin(), affected.end(), static_cast<int>(i));
    if (it != affected.end()) {
      const double move = std::max(0.0, s - contact_s[it - affected.begin()]);
      c = c + f.dir * move;
    }
    if (region_of[i] >= 0) total += point_polygon(c, state.regions[region_of[i]].polygon);
  }
  return total;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

}  // namespace oracle
