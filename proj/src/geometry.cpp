#include "pushsort/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pushsort/errors.hpp"

namespace pushsort {

namespace {

constexpr double kUnitTol = 1e-12;

// Inward unit normal of the edge from a to b on a counterclockwise polygon.
Vec2 inward_normal(Vec2 a, Vec2 b) {
  Vec2 e = b - a;
  double len = e.norm();
  return e.perp() * (1.0 / len);
}

}  // namespace

Direction::Direction(Vec2 v) : v_(v) {
  if (std::abs(v.norm() - 1.0) > kUnitTol) {
    throw StructuralError("Direction requires a unit vector");
  }
}

Direction Direction::of(Vec2 v) {
  double n = v.norm();
  if (n < kGeomTol) throw StructuralError("Direction::of: near-zero vector");
  return Direction(v * (1.0 / n));
}

Direction Direction::from_angle(double radians) {
  return Direction(Vec2{std::cos(radians), std::sin(radians)});
}

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) : verts_(std::move(vertices)) {
  const int n = static_cast<int>(verts_.size());
  if (n < 3) throw StructuralError("polygon needs at least 3 vertices");
  for (int i = 0; i < n; ++i) {
    Vec2 a = verts_[static_cast<size_t>(i)];
    Vec2 b = verts_[static_cast<size_t>((i + 1) % n)];
    if (dist(a, b) <= kGeomTol) throw StructuralError("polygon has repeated vertices");
  }
  for (int i = 0; i < n; ++i) {
    Vec2 prev = verts_[static_cast<size_t>((i + n - 1) % n)];
    Vec2 cur = verts_[static_cast<size_t>(i)];
    Vec2 next = verts_[static_cast<size_t>((i + 1) % n)];
    Vec2 e0 = cur - prev;
    Vec2 e1 = next - cur;
    // Strict left turn at every vertex; the threshold scales with edge lengths
    // so small polygons are not rejected spuriously.
    if (e0.cross(e1) <= kGeomTol * e0.norm() * e1.norm()) {
      throw StructuralError("polygon is not strictly convex counterclockwise");
    }
  }
}

Vec2 ConvexPolygon::centroid() const {
  // Area-weighted centroid.
  double area2 = 0.0;
  Vec2 acc{0.0, 0.0};
  const int n = size();
  for (int i = 0; i < n; ++i) {
    Vec2 a = verts_[static_cast<size_t>(i)];
    Vec2 b = verts_[static_cast<size_t>((i + 1) % n)];
    double w = a.cross(b);
    area2 += w;
    acc = acc + (a + b) * w;
  }
  return acc * (1.0 / (3.0 * area2));
}

ConvexPolygon ConvexPolygon::translated(Vec2 delta) const {
  std::vector<Vec2> moved = verts_;
  for (Vec2& v : moved) v = v + delta;
  return ConvexPolygon(std::move(moved));
}

bool ConvexPolygon::contains(Vec2 p) const {
  const int n = size();
  for (int i = 0; i < n; ++i) {
    Vec2 a = verts_[static_cast<size_t>(i)];
    Vec2 b = verts_[static_cast<size_t>((i + 1) % n)];
    if (inward_normal(a, b).dot(p - a) < -kGeomTol) return false;
  }
  return true;
}

std::pair<Vec2, Vec2> ConvexPolygon::bounding_box() const {
  Vec2 lo = verts_[0], hi = verts_[0];
  for (Vec2 v : verts_) {
    lo.x = std::min(lo.x, v.x);
    lo.y = std::min(lo.y, v.y);
    hi.x = std::max(hi.x, v.x);
    hi.y = std::max(hi.y, v.y);
  }
  return {lo, hi};
}

ConvexPolygon ConvexPolygon::axis_aligned_box(Vec2 lo, Vec2 hi) {
  return ConvexPolygon({{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}});
}

double dist_point_polygon(Vec2 p, const ConvexPolygon& poly) {
  if (poly.contains(p)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const int n = poly.size();
  for (int i = 0; i < n; ++i) {
    Vec2 a = poly.vertex(i);
    Vec2 b = poly.vertex((i + 1) % n);
    Vec2 e = b - a;
    double t = std::clamp((p - a).dot(e) / e.norm_sq(), 0.0, 1.0);
    best = std::min(best, dist(p, a + e * t));
  }
  return best;
}

Feature closest_feature(Vec2 p, const ConvexPolygon& poly) {
  if (poly.contains(p)) return Feature{Feature::Kind::Interior, 0};
  double best = std::numeric_limits<double>::infinity();
  Feature feat{Feature::Kind::Vertex, 0};
  const int n = poly.size();
  for (int i = 0; i < n; ++i) {
    Vec2 a = poly.vertex(i);
    Vec2 b = poly.vertex((i + 1) % n);
    Vec2 e = b - a;
    double t = (p - a).dot(e) / e.norm_sq();
    Feature cand;
    Vec2 closest;
    if (t <= 0.0) {
      cand = Feature{Feature::Kind::Vertex, i};
      closest = a;
    } else if (t >= 1.0) {
      cand = Feature{Feature::Kind::Vertex, (i + 1) % n};
      closest = b;
    } else {
      cand = Feature{Feature::Kind::Edge, i};
      closest = a + e * t;
    }
    double d = dist(p, closest);
    // Near-equidistant features count as ties; the lower-ranked one wins so
    // the answer is deterministic under symmetric inputs.
    if (d < best - kGeomTol || (d <= best + kGeomTol && cand.rank() < feat.rank())) {
      if (d < best) best = d;
      feat = cand;
    }
  }
  return feat;
}

double dist_polygon_polygon(const ConvexPolygon& a, const ConvexPolygon& b) {
  if (polygon_penetration(a, b).depth >= 0.0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (Vec2 v : a.vertices()) best = std::min(best, dist_point_polygon(v, b));
  for (Vec2 v : b.vertices()) best = std::min(best, dist_point_polygon(v, a));
  return best;
}

std::pair<double, double> supports(const ConvexPolygon& poly, const Direction& d) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Vec2 v : poly.vertices()) {
    double s = d.dot(v);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return {lo, hi};
}

namespace {

// Clips the line origin + t*dir against the polygon half-planes. Returns the
// parameter interval of the inside portion, or empty when the line misses.
std::optional<std::pair<double, double>> clip_line(Vec2 origin, Vec2 dir,
                                                   const ConvexPolygon& poly) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  const int n = poly.size();
  for (int i = 0; i < n; ++i) {
    Vec2 a = poly.vertex(i);
    Vec2 b = poly.vertex((i + 1) % n);
    Vec2 nrm = inward_normal(a, b);
    double da = nrm.dot(dir);
    double db = nrm.dot(origin - a);
    if (std::abs(da) < 1e-15) {
      if (db < -kGeomTol) return std::nullopt;  // parallel and outside
      continue;
    }
    double t = -db / da;
    if (da > 0.0) {
      lo = std::max(lo, t);
    } else {
      hi = std::min(hi, t);
    }
  }
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

}  // namespace

std::optional<std::pair<double, double>> line_clip(Vec2 origin, const Direction& dir,
                                                   const ConvexPolygon& poly) {
  return clip_line(origin, dir.vec(), poly);
}

std::optional<double> raycast(Vec2 origin, const Direction& dir, const ConvexPolygon& poly) {
  auto span = clip_line(origin, dir.vec(), poly);
  if (!span) return std::nullopt;
  auto [lo, hi] = *span;
  if (hi < 0.0) return std::nullopt;  // polygon entirely behind the origin
  return std::max(lo, 0.0);
}

std::vector<FeatureSegment> feature_segments(Vec2 start, const Direction& dir, double length,
                                             const ConvexPolygon& poly) {
  if (length < 0.0) throw StructuralError("feature_segments: negative length");
  Vec2 d = dir.vec();
  if (length == 0.0) {
    return {FeatureSegment{0.0, 0.0, closest_feature(start, poly)}};
  }

  std::vector<double> cuts{0.0, length};
  auto add_cut = [&](double s) {
    if (s > 0.0 && s < length) cuts.push_back(s);
  };

  // Polygon entry and exit.
  if (auto span = clip_line(start, d, poly)) {
    add_cut(span->first);
    add_cut(span->second);
  }

  // Voronoi wedge boundaries: at vertex v the exterior wedge is bounded by
  // lines through v perpendicular to nothing in particular — they are the loci
  // (x - v) . u = 0 for the two adjacent edge tangents u.
  const int n = poly.size();
  for (int i = 0; i < n; ++i) {
    Vec2 v = poly.vertex(i);
    Vec2 prev = poly.vertex((i + n - 1) % n);
    Vec2 next = poly.vertex((i + 1) % n);
    for (Vec2 u : {v - prev, next - v}) {
      double du = d.dot(u);
      if (std::abs(du) < 1e-15) continue;  // path parallel to this boundary
      add_cut((v - start).dot(u) / du);
    }
  }

  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return b - a <= 1e-12; }),
             cuts.end());
  if (cuts.back() < length) cuts.push_back(length);

  std::vector<FeatureSegment> segs;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    double lo = cuts[k], hi = cuts[k + 1];
    Feature f = closest_feature(start + d * (0.5 * (lo + hi)), poly);
    if (!segs.empty() && segs.back().feature == f) {
      segs.back().hi = hi;  // merge spans sharing a feature
    } else {
      segs.push_back(FeatureSegment{lo, hi, f});
    }
  }
  return segs;
}

bool ball_in_polygon(Vec2 center, double radius, const ConvexPolygon& poly) {
  const int n = poly.size();
  for (int i = 0; i < n; ++i) {
    Vec2 a = poly.vertex(i);
    Vec2 b = poly.vertex((i + 1) % n);
    if (inward_normal(a, b).dot(center - a) < radius - kGeomTol) return false;
  }
  return true;
}

Penetration polygon_penetration(const ConvexPolygon& a, const ConvexPolygon& b) {
  double best = std::numeric_limits<double>::infinity();
  Vec2 best_axis{1.0, 0.0};
  auto consider = [&](const ConvexPolygon& owner) {
    const int n = owner.size();
    for (int i = 0; i < n; ++i) {
      Vec2 u = -inward_normal(owner.vertex(i), owner.vertex((i + 1) % n));
      double a_lo = std::numeric_limits<double>::infinity(), a_hi = -a_lo;
      double b_lo = a_lo, b_hi = -a_lo;
      for (Vec2 v : a.vertices()) {
        double s = u.dot(v);
        a_lo = std::min(a_lo, s);
        a_hi = std::max(a_hi, s);
      }
      for (Vec2 v : b.vertices()) {
        double s = u.dot(v);
        b_lo = std::min(b_lo, s);
        b_hi = std::max(b_hi, s);
      }
      double overlap = std::min(a_hi, b_hi) - std::max(a_lo, b_lo);
      if (overlap < best) {
        best = overlap;
        // Sign chosen so translating b along the axis separates the pair.
        best_axis = (b_lo + b_hi >= a_lo + a_hi) ? u : -u;
      }
    }
  };
  consider(a);
  consider(b);
  return Penetration{best, best_axis};
}

}  // namespace pushsort
