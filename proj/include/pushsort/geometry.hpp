#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

namespace pushsort {

// Geometric comparisons treat values within this tolerance as coincident.
inline constexpr double kGeomTol = 1e-9;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
  bool operator==(const Vec2&) const = default;

  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double norm_sq() const { return x * x + y * y; }
  // Counterclockwise quarter turn.
  Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

inline double dist(Vec2 a, Vec2 b) { return (a - b).norm(); }

// Unit vector. Constructing from a non-unit vector throws unless normalized
// explicitly via Direction::of.
class Direction {
 public:
  explicit Direction(Vec2 v);
  static Direction of(Vec2 v);  // normalizes, rejects near-zero vectors
  static Direction from_angle(double radians);

  Vec2 vec() const { return v_; }
  Direction perp() const { return Direction(v_.perp()); }
  double dot(Vec2 p) const { return v_.dot(p); }

 private:
  Vec2 v_;
};

// Closest-feature identification on a convex polygon boundary. Vertex k is the
// k-th polygon vertex; edge k runs from vertex k to vertex k+1 (mod V).
struct Feature {
  enum class Kind { Vertex, Edge, Interior };
  Kind kind = Kind::Interior;
  int index = 0;

  bool operator==(const Feature&) const = default;
  // Total order used to break exact-distance ties: vertex k, then edge k, then
  // vertex k+1, ...; interior sorts last (it never ties with boundary features
  // at positive distance).
  int rank() const {
    if (kind == Kind::Interior) return 1 << 30;
    return 2 * index + (kind == Kind::Edge ? 1 : 0);
  }
};

// One span of a straight-line path over which the same polygon feature stays
// closest. Bounds are path parameters (meters from the path start).
struct FeatureSegment {
  double lo = 0.0;
  double hi = 0.0;
  Feature feature;
};

// Strictly convex polygon, vertices counterclockwise. Validated on
// construction: at least 3 vertices, no repeats within kGeomTol, every turn a
// strict left turn.
class ConvexPolygon {
 public:
  explicit ConvexPolygon(std::vector<Vec2> vertices);

  const std::vector<Vec2>& vertices() const { return verts_; }
  int size() const { return static_cast<int>(verts_.size()); }
  Vec2 vertex(int i) const { return verts_[static_cast<size_t>(i)]; }
  Vec2 centroid() const;

  ConvexPolygon translated(Vec2 delta) const;

  // Closed containment (boundary counts as inside).
  bool contains(Vec2 p) const;
  std::pair<Vec2, Vec2> bounding_box() const;

  static ConvexPolygon axis_aligned_box(Vec2 lo, Vec2 hi);

 private:
  std::vector<Vec2> verts_;
};

// Euclidean distance from a point to a convex polygon; 0 inside or on the
// boundary.
double dist_point_polygon(Vec2 p, const ConvexPolygon& poly);

// Closest feature of the polygon as seen from p, with ties resolved by
// Feature::rank (lower rank wins).
Feature closest_feature(Vec2 p, const ConvexPolygon& poly);

// Distance between two convex polygons; 0 when they touch or overlap.
double dist_polygon_polygon(const ConvexPolygon& a, const ConvexPolygon& b);

// Support interval of the polygon along a unit direction:
// [min_k d.v_k, max_k d.v_k].
std::pair<double, double> supports(const ConvexPolygon& poly, const Direction& d);

// Parameter interval of the full line origin + t*dir inside the polygon.
// Empty when the line misses; the interval may lie entirely at negative t.
std::optional<std::pair<double, double>> line_clip(Vec2 origin, const Direction& dir,
                                                   const ConvexPolygon& poly);

// Smallest t >= 0 with origin + t*dir touching the polygon; 0 if the origin
// starts inside. Empty when the ray misses.
std::optional<double> raycast(Vec2 origin, const Direction& dir, const ConvexPolygon& poly);

// Partition of the path start + s*dir, s in [0, length], by closest polygon
// feature. Segments are contiguous from 0, cover [0, length], and adjacent
// segments carry distinct features. Breakpoints are computed analytically
// (Voronoi wedge boundaries and polygon entry/exit), not by sampling.
std::vector<FeatureSegment> feature_segments(Vec2 start, const Direction& dir, double length,
                                             const ConvexPolygon& poly);

// True when the closed disc of given radius around center lies inside the
// polygon.
bool ball_in_polygon(Vec2 center, double radius, const ConvexPolygon& poly);

// Signed penetration of two convex polygons: depth > 0 with the minimum
// translation axis (unit vector, pointing from a toward b) when interiors
// overlap; depth <= 0 (separation distance along the best axis) otherwise.
struct Penetration {
  double depth = 0.0;
  Vec2 axis;  // translate b by axis*depth to separate
};
Penetration polygon_penetration(const ConvexPolygon& a, const ConvexPolygon& b);

inline bool polygons_overlap(const ConvexPolygon& a, const ConvexPolygon& b, double tol = kGeomTol) {
  return polygon_penetration(a, b).depth > tol;
}

}  // namespace pushsort
