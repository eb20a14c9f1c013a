#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "pushsort/errors.hpp"
#include "pushsort/geometry.hpp"

using namespace pushsort;

namespace {

// Sampled boundary minimum: coarse scan per edge, then ternary refinement
// (distance to a point is convex along each edge).
double boundary_min_sampled(Vec2 p, const ConvexPolygon& poly) {
  double best = oracle::kInf;
  const int n = poly.size();
  for (int i = 0; i < n; ++i) {
    const Vec2 a = poly.vertex(i);
    const Vec2 b = poly.vertex((i + 1) % n);
    auto at = [&](double s) { return (p - (a + (b - a) * s)).norm(); };
    double lo = 0.0, hi = 1.0;
    double coarse = oracle::kInf;
    double arg = 0.0;
    for (int k = 0; k <= 64; ++k) {
      const double s = k / 64.0;
      if (at(s) < coarse) {
        coarse = at(s);
        arg = s;
      }
    }
    lo = std::max(0.0, arg - 1.0 / 64.0);
    hi = std::min(1.0, arg + 1.0 / 64.0);
    for (int it = 0; it < 80; ++it) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      if (at(m1) <= at(m2)) {
        hi = m2;
      } else {
        lo = m1;
      }
    }
    best = std::min(best, at(0.5 * (lo + hi)));
  }
  return best;
}

ConvexPolygon unit_square() { return ConvexPolygon::axis_aligned_box({0.0, 0.0}, {1.0, 1.0}); }

ConvexPolygon shrunk(const ConvexPolygon& poly, double factor) {
  const Vec2 c = poly.centroid();
  std::vector<Vec2> pts;
  for (Vec2 v : poly.vertices()) pts.push_back(c + (v - c) * factor);
  return ConvexPolygon(pts);
}

}  // namespace

TEST_CASE("vector primitives") {
  const Vec2 a{3.0, 4.0};
  CHECK(a.norm() == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(a.norm_sq() == doctest::Approx(25.0).epsilon(1e-12));
  CHECK(Vec2{1.0, 0.0}.perp().x == doctest::Approx(0.0));
  CHECK(Vec2{1.0, 0.0}.perp().y == doctest::Approx(1.0));  // quarter turn CCW
  CHECK(Vec2{1.0, 2.0}.cross({3.0, 4.0}) == doctest::Approx(-2.0));
  CHECK(dist({0.0, 0.0}, {1.0, 1.0}) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("direction construction") {
  CHECK_THROWS_AS(Direction({1.0, 1.0}), StructuralError);
  CHECK_THROWS_AS(Direction::of({0.0, 0.0}), StructuralError);
  const Direction d = Direction::of({3.0, 4.0});
  CHECK(d.vec().x == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(d.vec().y == doctest::Approx(0.8).epsilon(1e-12));
  const Direction e = Direction::from_angle(std::numbers::pi / 2.0);
  CHECK(e.vec().y == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.perp().vec().x == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("polygon construction rejects degenerate input") {
  CHECK_THROWS_AS(ConvexPolygon({{0.0, 0.0}, {1.0, 0.0}}), StructuralError);
  CHECK_THROWS_AS(ConvexPolygon({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}}), StructuralError);
  CHECK_THROWS_AS(ConvexPolygon({{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}}), StructuralError);  // CW
  CHECK_THROWS_AS(ConvexPolygon({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1e-12}, {0.5, 1.0}}),
                  StructuralError);
  // non-convex quad
  CHECK_THROWS_AS(ConvexPolygon({{0.0, 0.0}, {1.0, 0.0}, {0.2, 0.2}, {0.0, 1.0}}),
                  StructuralError);
}

TEST_CASE("polygon accessors on the unit square") {
  const ConvexPolygon sq = unit_square();
  CHECK(sq.size() == 4);
  CHECK(sq.centroid().x == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sq.centroid().y == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sq.contains({0.5, 0.5}));
  CHECK(sq.contains({0.0, 0.5}));  // boundary is inside
  CHECK(!sq.contains({1.0 + 1e-6, 0.5}));
  const auto [lo, hi] = sq.bounding_box();
  CHECK(lo.x == 0.0);
  CHECK(hi.y == 1.0);
  const ConvexPolygon moved = sq.translated({2.0, 3.0});
  CHECK(moved.vertex(0).x == doctest::Approx(2.0));
  CHECK(moved.centroid().y == doctest::Approx(3.5));
}

TEST_CASE("point-polygon distance matches the sampled boundary minimum") {
  auto g = oracle::rng(11);
  for (int it = 0; it < 1000; ++it) {
    const ConvexPolygon poly = oracle::random_convex(
        g, {oracle::uniform(g, -0.2, 0.2), oracle::uniform(g, -0.2, 0.2)},
        oracle::uniform(g, 0.05, 0.3), oracle::uniform_int(g, 3, 8));
    const Vec2 p{oracle::uniform(g, -0.8, 0.8), oracle::uniform(g, -0.8, 0.8)};
    const double got = dist_point_polygon(p, poly);
    if (oracle::inside_convex(p, poly)) {
      CHECK(got == 0.0);
    } else {
      CHECK(std::abs(got - boundary_min_sampled(p, poly)) <= 1e-6);
      CHECK(std::abs(got - oracle::point_polygon(p, poly)) <= 1e-9);
    }
  }
}

TEST_CASE("closest feature picks the lower rank on ties") {
  const ConvexPolygon sq = unit_square();
  // (1.5, 1.0) is equidistant to the right edge, the top-right vertex, and
  // the top edge; the right edge has the lowest rank.
  const Feature f = closest_feature({1.5, 1.0}, sq);
  CHECK(f.kind == Feature::Kind::Edge);
  CHECK(f.index == 1);
  const Feature inside = closest_feature({0.5, 0.5}, sq);
  CHECK(inside.kind == Feature::Kind::Interior);
  const Feature v = closest_feature({-1.0, -1.0}, sq);
  CHECK(v.kind == Feature::Kind::Vertex);
  CHECK(v.index == 0);
  const Feature e = closest_feature({0.5, -1.0}, sq);
  CHECK(e.kind == Feature::Kind::Edge);
  CHECK(e.index == 0);
}

TEST_CASE("feature segments tile the path and are exactly quadratic") {
  auto g = oracle::rng(12);
  for (int it = 0; it < 120; ++it) {
    const ConvexPolygon poly = oracle::random_convex(
        g, {oracle::uniform(g, -0.1, 0.1), oracle::uniform(g, -0.1, 0.1)},
        oracle::uniform(g, 0.05, 0.2), oracle::uniform_int(g, 3, 7));
    const Vec2 start{oracle::uniform(g, -0.6, 0.6), oracle::uniform(g, -0.6, 0.6)};
    const Direction dir = Direction::from_angle(oracle::uniform(g, 0.0, 2.0 * std::numbers::pi));
    const double length = oracle::uniform(g, 0.2, 1.2);
    const std::vector<FeatureSegment> segs = feature_segments(start, dir, length, poly);
    REQUIRE(!segs.empty());
    CHECK(segs.front().lo == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(segs.back().hi == doctest::Approx(length).epsilon(1e-9));
    for (std::size_t k = 0; k + 1 < segs.size(); ++k) {
      CHECK(segs[k].hi == doctest::Approx(segs[k + 1].lo).epsilon(1e-9));
      CHECK(segs[k].feature.rank() != segs[k + 1].feature.rank());
    }
    for (const FeatureSegment& seg : segs) {
      if (seg.hi - seg.lo < 1e-7) continue;
      double sq[10];
      double ss[10];
      for (int i = 0; i < 10; ++i) {
        const double s = seg.lo + (seg.hi - seg.lo) * (i + 0.5) / 10.0;
        const double d = dist_point_polygon(start + dir.vec() * s, poly);
        ss[i] = s;
        sq[i] = d * d;
      }
      // quadratic through the first three samples must predict the rest
      const double s0 = ss[0], s1 = ss[1], s2 = ss[2];
      const double l0 = sq[0] / ((s0 - s1) * (s0 - s2));
      const double l1 = sq[1] / ((s1 - s0) * (s1 - s2));
      const double l2 = sq[2] / ((s2 - s0) * (s2 - s1));
      for (int i = 3; i < 10; ++i) {
        const double s = ss[i];
        const double fit = l0 * (s - s1) * (s - s2) + l1 * (s - s0) * (s - s2) +
                           l2 * (s - s0) * (s - s1);
        CHECK(std::abs(fit - sq[i]) <= 1e-9);
      }
      // the fixed feature explains the distance at each sample
      for (int i = 0; i < 10; ++i) {
        const Vec2 p = start + dir.vec() * ss[i];
        double feat = 0.0;
        if (seg.feature.kind == Feature::Kind::Vertex) {
          feat = dist(p, poly.vertex(seg.feature.index));
        } else if (seg.feature.kind == Feature::Kind::Edge) {
          feat = oracle::point_segment(p, poly.vertex(seg.feature.index),
                                       poly.vertex((seg.feature.index + 1) % poly.size()));
        }
        CHECK(std::abs(feat - std::sqrt(sq[i])) <= 1e-9);
      }
    }
  }
}

TEST_CASE("supports are antisymmetric") {
  auto g = oracle::rng(13);
  for (int it = 0; it < 300; ++it) {
    const ConvexPolygon poly =
        oracle::random_convex(g, {0.0, 0.0}, oracle::uniform(g, 0.05, 0.4), 3 + it % 6);
    const Direction d = Direction::from_angle(oracle::uniform(g, 0.0, 2.0 * std::numbers::pi));
    const Direction neg = Direction::of(d.vec() * -1.0);
    const auto [lo, hi] = supports(poly, d);
    const auto [nlo, nhi] = supports(poly, neg);
    CHECK(lo == doctest::Approx(-nhi).epsilon(1e-12));
    CHECK(hi == doctest::Approx(-nlo).epsilon(1e-12));
    CHECK(lo <= hi);
    const auto [olo, ohi] = oracle::project(poly, d.vec());
    CHECK(lo == doctest::Approx(olo).epsilon(1e-12));
    CHECK(hi == doctest::Approx(ohi).epsilon(1e-12));
  }
}

TEST_CASE("raycast on the unit square") {
  const ConvexPolygon sq = unit_square();
  const Direction px = Direction::of({1.0, 0.0});
  CHECK(*raycast({-1.0, 0.5}, px, sq) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*raycast({0.5, 0.5}, px, sq) == 0.0);
  CHECK(!raycast({-1.0, 2.0}, px, sq));
  CHECK(!raycast({2.0, 0.5}, px, sq));  // polygon behind the origin
}

TEST_CASE("raycast agrees with the clipping oracle and shrinking is monotone") {
  auto g = oracle::rng(14);
  int hits = 0;
  for (int it = 0; it < 500; ++it) {
    const ConvexPolygon poly = oracle::random_convex(
        g, {oracle::uniform(g, -0.2, 0.2), oracle::uniform(g, -0.2, 0.2)},
        oracle::uniform(g, 0.05, 0.3), oracle::uniform_int(g, 3, 8));
    const Vec2 origin{oracle::uniform(g, -1.0, 1.0), oracle::uniform(g, -1.0, 1.0)};
    const Direction dir = Direction::from_angle(oracle::uniform(g, 0.0, 2.0 * std::numbers::pi));
    const std::optional<double> got = raycast(origin, dir, poly);
    const std::optional<double> want = oracle::ray_polygon(origin, dir.vec(), poly);
    CHECK(got.has_value() == want.has_value());
    if (got && want) {
      CHECK(std::abs(*got - *want) <= 1e-9);
      ++hits;
      double prev = *got;
      for (double factor : {0.9, 0.7, 0.4}) {
        const std::optional<double> t = raycast(origin, dir, shrunk(poly, factor));
        if (!t) break;  // treated as unbounded, still monotone
        CHECK(*t >= prev - 1e-9);
        prev = *t;
      }
    }
  }
  CHECK(hits > 50);  // the sweep actually exercised intersections
}

TEST_CASE("line clip through the unit square") {
  const ConvexPolygon sq = unit_square();
  const auto span = line_clip({0.5, 0.5}, Direction::of({1.0, 0.0}), sq);
  REQUIRE(span.has_value());
  CHECK(span->first == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(span->second == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(!line_clip({0.0, 2.0}, Direction::of({1.0, 0.0}), sq));
}

TEST_CASE("polygon-polygon distance") {
  const ConvexPolygon a = oracle::square({0.0, 0.0}, 1.0);
  const ConvexPolygon b = oracle::square({1.8, 0.0}, 1.0);
  CHECK(dist_polygon_polygon(a, b) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(dist_polygon_polygon(a, oracle::square({0.5, 0.0}, 1.0)) == 0.0);

  auto g = oracle::rng(15);
  for (int it = 0; it < 200; ++it) {
    const ConvexPolygon p = oracle::random_convex(
        g, {oracle::uniform(g, -0.6, 0.6), oracle::uniform(g, -0.6, 0.6)},
        oracle::uniform(g, 0.05, 0.25), oracle::uniform_int(g, 3, 7));
    const ConvexPolygon q = oracle::random_convex(
        g, {oracle::uniform(g, -0.6, 0.6), oracle::uniform(g, -0.6, 0.6)},
        oracle::uniform(g, 0.05, 0.25), oracle::uniform_int(g, 3, 7));
    if (oracle::sat_overlap(p, q)) {
      CHECK(dist_polygon_polygon(p, q) == 0.0);
      continue;
    }
    // closest pair of disjoint convex polygons is vertex-to-edge
    double want = oracle::kInf;
    for (Vec2 v : p.vertices()) want = std::min(want, oracle::point_polygon(v, q));
    for (Vec2 v : q.vertices()) want = std::min(want, oracle::point_polygon(v, p));
    CHECK(std::abs(dist_polygon_polygon(p, q) - want) <= 1e-9);
  }
}

TEST_CASE("ball containment in a square") {
  const ConvexPolygon sq = unit_square();
  CHECK(ball_in_polygon({0.5, 0.5}, 0.5, sq));
  CHECK(ball_in_polygon({0.5, 0.5}, 0.49, sq));
  CHECK(!ball_in_polygon({0.5, 0.5}, 0.51, sq));
  CHECK(!ball_in_polygon({0.2, 0.5}, 0.25, sq));
  CHECK(ball_in_polygon({0.3, 0.5}, 0.25, sq));
}

TEST_CASE("penetration depth and axis") {
  const ConvexPolygon a = oracle::square({0.0, 0.0}, 1.0);
  SUBCASE("overlapping pair") {
    const ConvexPolygon b = oracle::square({0.8, 0.0}, 1.0);
    const Penetration pen = polygon_penetration(a, b);
    CHECK(pen.depth == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(pen.axis.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(polygons_overlap(a, b));
    const ConvexPolygon separated = b.translated(pen.axis * (pen.depth + 1e-9));
    CHECK(!polygons_overlap(a, separated));
  }
  SUBCASE("disjoint pair reports the gap as negative depth") {
    const ConvexPolygon b = oracle::square({1.5, 0.2}, 1.0);
    const Penetration pen = polygon_penetration(a, b);
    CHECK(pen.depth == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(!polygons_overlap(a, b));
  }
}

TEST_CASE("overlap predicate agrees with a SAT oracle") {
  auto g = oracle::rng(16);
  for (int it = 0; it < 500; ++it) {
    const ConvexPolygon p = oracle::random_convex(
        g, {oracle::uniform(g, -0.3, 0.3), oracle::uniform(g, -0.3, 0.3)},
        oracle::uniform(g, 0.05, 0.25), oracle::uniform_int(g, 3, 7));
    const ConvexPolygon q = oracle::random_convex(
        g, {oracle::uniform(g, -0.3, 0.3), oracle::uniform(g, -0.3, 0.3)},
        oracle::uniform(g, 0.05, 0.25), oracle::uniform_int(g, 3, 7));
    if (std::abs(oracle::sat_depth(p, q)) < 1e-7) continue;  // borderline, skip
    CHECK(polygons_overlap(p, q) == oracle::sat_overlap(p, q));
  }
}
