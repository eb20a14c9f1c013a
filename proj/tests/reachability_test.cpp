#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "pushsort/errors.hpp"
#include "pushsort/reachability.hpp"

using namespace pushsort;

TEST_CASE("convex map answers membership and bounds") {
  const ConvexMap map(ConvexPolygon::axis_aligned_box({0, 0}, {1, 1}));
  CHECK(map.reach({0.5, 0.5}));
  CHECK(map.reach({0.0, 0.0}));  // boundary counts
  CHECK(map.reach({1.0, 0.3}));
  CHECK(!map.reach({1.0 + 1e-6, 0.3}));
  CHECK(!map.reach({-0.2, 0.5}));
  const auto [lo, hi] = map.bounds();
  CHECK(lo.x == doctest::Approx(0.0));
  CHECK(hi.y == doctest::Approx(1.0));
}

TEST_CASE("convex trajectories are straight lines") {
  auto g = oracle::rng(31);
  const ConvexMap map(oracle::random_convex(g, {0.5, 0.5}, 0.45, 7));
  for (int it = 0; it < 200; ++it) {
    const Vec2 a{oracle::uniform(g, 0.0, 1.0), oracle::uniform(g, 0.0, 1.0)};
    const Vec2 b{oracle::uniform(g, 0.0, 1.0), oracle::uniform(g, 0.0, 1.0)};
    if (!map.reach(a) || !map.reach(b)) continue;
    CHECK(map.traj(a, b) == doctest::Approx((a - b).norm()).epsilon(1e-12));
  }
  CHECK_THROWS_AS(map.traj({0.5, 0.5}, {5.0, 5.0}), QueryError);
  CHECK_THROWS_AS(map.traj({5.0, 5.0}, {0.5, 0.5}), QueryError);
}

TEST_CASE("convex range spans the chord through the query point") {
  const ConvexMap map(ConvexPolygon::axis_aligned_box({0, 0}, {1, 1}));
  const auto [lo, hi] = map.range({0.3, 0.5}, Direction::of({1, 0}));
  CHECK(lo == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(hi == doctest::Approx(0.7).epsilon(1e-12));
  CHECK_THROWS_AS(map.range({2.0, 0.5}, Direction::of({1, 0})), QueryError);
}

TEST_CASE("range endpoints are reachable and one step beyond is not") {
  auto g = oracle::rng(32);
  const ConvexMap map(oracle::random_convex(g, {0.5, 0.5}, 0.45, 8));
  int checked = 0;
  for (int it = 0; it < 300; ++it) {
    const Vec2 p{oracle::uniform(g, 0.1, 0.9), oracle::uniform(g, 0.1, 0.9)};
    if (!map.reach(p)) continue;
    const Direction dir = Direction::from_angle(oracle::uniform(g, 0.0, 6.28318530718));
    const auto [a, b] = map.range(p, dir);
    CHECK(a <= 0.0);
    CHECK(b >= 0.0);
    CHECK(map.reach(p + dir.vec() * a));
    CHECK(map.reach(p + dir.vec() * b));
    CHECK(!map.reach(p + dir.vec() * (b + 1e-6)));
    CHECK(!map.reach(p + dir.vec() * (a - 1e-6)));
    ++checked;
  }
  CHECK(checked > 150);
}

TEST_CASE("grid map construction rejects bad shapes") {
  CHECK_THROWS_AS(GridMap({0, 0}, 0.0, 2, 2, std::vector<char>(4, 1)), StructuralError);
  CHECK_THROWS_AS(GridMap({0, 0}, 0.1, 0, 2, std::vector<char>{}), StructuralError);
  CHECK_THROWS_AS(GridMap({0, 0}, 0.1, 2, 2, std::vector<char>(3, 1)), StructuralError);
}

TEST_CASE("grid membership floors into cells") {
  // 2x2 grid, cell 0.5, upper-right cell blocked
  const GridMap map({0, 0}, 0.5, 2, 2, {1, 1, 1, 0});
  CHECK(map.reach({0.25, 0.25}));
  CHECK(map.reach({0.0, 0.0}));
  CHECK(map.reach({0.75, 0.25}));
  CHECK(!map.reach({0.75, 0.75}));  // blocked cell
  CHECK(!map.reach({-0.1, 0.25}));
  CHECK(!map.reach({1.1, 0.25}));
  const auto [lo, hi] = map.bounds();
  CHECK(hi.x == doctest::Approx(1.0));
  CHECK(hi.y == doctest::Approx(1.0));
  CHECK(lo.x == doctest::Approx(0.0));
}

TEST_CASE("grid trajectories walk 4-connected cells") {
  // 3x3, center blocked: the path has to go around
  std::vector<char> free(9, 1);
  free[4] = 0;
  const GridMap map({0, 0}, 1.0, 3, 3, free);
  CHECK(map.traj({0.5, 0.5}, {0.6, 0.4}) == doctest::Approx(0.0));
  CHECK(map.traj({0.5, 0.5}, {1.5, 0.5}) == doctest::Approx(1.0));
  CHECK(map.traj({0.5, 0.5}, {2.5, 2.5}) == doctest::Approx(4.0));
  CHECK_THROWS_AS(map.traj({0.5, 0.5}, {1.5, 1.5}), QueryError);  // goal blocked
}

TEST_CASE("grid trajectory through a separated component throws") {
  // free | blocked | free column layout
  const GridMap map({0, 0}, 1.0, 3, 1, {1, 0, 1});
  CHECK_THROWS_AS(map.traj({0.5, 0.5}, {2.5, 0.5}), QueryError);
  CHECK_THROWS_AS(map.range({1.5, 0.5}, Direction::of({1, 0})), QueryError);
}

TEST_CASE("grid range pins the frontier by bisection") {
  // one free row of 8 cells, cell 0.1: x spans [0, 0.8)
  const GridMap map({0, 0}, 0.1, 8, 1, std::vector<char>(8, 1));
  const auto [lo, hi] = map.range({0.35, 0.05}, Direction::of({1, 0}));
  CHECK(std::abs(hi - 0.45) <= 1e-6);
  CHECK(std::abs(lo - (-0.35)) <= 1e-6);
  CHECK(map.reach(Vec2{0.35, 0.05} + Vec2{hi, 0.0}));
  CHECK(map.reach(Vec2{0.35, 0.05} + Vec2{lo, 0.0}));

  // block the far end: frontier moves to the obstacle
  std::vector<char> free(8, 1);
  free[6] = 0;
  const GridMap walled({0, 0}, 0.1, 8, 1, free);
  const auto [wl, wh] = walled.range({0.35, 0.05}, Direction::of({1, 0}));
  CHECK(std::abs(wh - 0.25) <= 1e-6);
  CHECK(std::abs(wl - (-0.35)) <= 1e-6);
}
