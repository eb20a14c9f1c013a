#include "pushsort/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pushsort/errors.hpp"

namespace pushsort {

namespace {

ConvexPolygon rotated_about(const ConvexPolygon& poly, Vec2 center, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  std::vector<Vec2> verts;
  verts.reserve(static_cast<size_t>(poly.size()));
  for (const Vec2& v : poly.vertices()) {
    const Vec2 r = v - center;
    verts.push_back(center + Vec2{c * r.x - s * r.y, s * r.x + c * r.y});
  }
  return ConvexPolygon(std::move(verts));
}

bool bbox_overlap(const std::pair<Vec2, Vec2>& a, const std::pair<Vec2, Vec2>& b, double pad) {
  return a.first.x - pad <= b.second.x && b.first.x - pad <= a.second.x &&
         a.first.y - pad <= b.second.y && b.first.y - pad <= a.second.y;
}

// Objects that the advancing pusher could move this step, transitively: seed
// with bodies near the swept volume, grow through near-contact adjacency.
std::vector<int> active_set(const SceneState& state, const ConvexPolygon& swept, double reach) {
  const int n = state.num_objects();
  std::vector<std::pair<Vec2, Vec2>> boxes(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    boxes[static_cast<size_t>(i)] = state.objects[static_cast<size_t>(i)].shape.bounding_box();
  const auto sweep_box = swept.bounding_box();
  std::vector<char> in(static_cast<size_t>(n), 0);
  std::vector<int> queue;
  for (int i = 0; i < n; ++i)
    if (bbox_overlap(boxes[static_cast<size_t>(i)], sweep_box, reach)) {
      in[static_cast<size_t>(i)] = 1;
      queue.push_back(i);
    }
  for (size_t q = 0; q < queue.size(); ++q) {
    const int i = queue[q];
    for (int j = 0; j < n; ++j) {
      if (in[static_cast<size_t>(j)]) continue;
      if (bbox_overlap(boxes[static_cast<size_t>(i)], boxes[static_cast<size_t>(j)], reach)) {
        in[static_cast<size_t>(j)] = 1;
        queue.push_back(j);
      }
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

void translate_object(ObjectState& obj, Vec2 delta) {
  obj.shape = obj.shape.translated(delta);
  obj.center = obj.center + delta;
}

// Torque-free small-angle heuristic: rotate toward the contact normal in
// proportion to how far off-center the deepest vertex sits.
void apply_rotation(ObjectState& obj, Vec2 axis, double depth) {
  // Deepest vertex along the separation axis (most opposed to it).
  int deepest = 0;
  double best = 1e30;
  for (int k = 0; k < obj.shape.size(); ++k) {
    const double d = axis.dot(obj.shape.vertex(k));
    if (d < best) {
      best = d;
      deepest = k;
    }
  }
  const Vec2 arm = obj.shape.vertex(deepest) - obj.center;
  if (arm.norm() < kGeomTol || obj.radius < kGeomTol) return;
  const double angle =
      std::clamp(arm.cross(axis) * depth / (obj.radius * obj.radius), -0.05, 0.05);
  if (angle == 0.0) return;
  obj.shape = rotated_about(obj.shape, obj.center, angle);
}

}  // namespace

SceneState step_push(const SceneState& state, const ConvexPolygon& pusher_body,
                     const Direction& dir, double advance, const SimConfig& cfg) {
  if (advance < 0.0) throw SimulationError("negative pusher advance");
  if (cfg.increment <= 0.0 || cfg.iterations < 1)
    throw SimulationError("invalid simulator configuration");
  SceneState out = state;
  const ConvexPolygon body = pusher_body.translated(dir.vec() * advance);

  // Axis-aligned box around the start and end poses bounds the swept volume.
  std::vector<Vec2> both = pusher_body.vertices();
  for (const Vec2& v : body.vertices()) both.push_back(v);
  Vec2 lo = both[0], hi = both[0];
  for (const Vec2& v : both) {
    lo.x = std::min(lo.x, v.x);
    lo.y = std::min(lo.y, v.y);
    hi.x = std::max(hi.x, v.x);
    hi.y = std::max(hi.y, v.y);
  }
  const ConvexPolygon swept = ConvexPolygon::axis_aligned_box(lo, hi);

  const std::vector<int> active = active_set(out, swept, advance + 0.005);
  if (active.empty()) return out;

  bool settled = false;
  for (int it = 0; it < cfg.iterations && !settled; ++it) {
    settled = true;
    // Front-to-back along the push direction, ties toward smaller index.
    std::vector<int> order = active;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double da = dir.dot(out.objects[static_cast<size_t>(a)].center);
      const double db = dir.dot(out.objects[static_cast<size_t>(b)].center);
      return da != db ? da > db : a < b;
    });
    for (int i : order) {
      ObjectState& obj = out.objects[static_cast<size_t>(i)];
      // Each turn applies one projection: the deepest contact that does not
      // move the object backward against the push. Quasi-static pushing
      // transmits force forward only, so backward projections are deferred
      // and the other side of that contact resolves forward at its own turn.
      // Applying several projections in one turn lets them cancel, which
      // stalls squeeze chains: the transient overlap never becomes visible
      // to the chain end that has room to yield. One projection per turn
      // shifts such a chain by one object per sweep. Deferred and unpicked
      // contacts still keep the sweep unsettled.
      Penetration pick;
      bool found = false;
      auto consider = [&](const Penetration& pen) {
        if (pen.depth <= cfg.tolerance) return;
        settled = false;
        if (pen.axis.dot(dir.vec()) < -1e-9) return;
        if (!found || pen.depth > pick.depth) {
          pick = pen;
          found = true;
        }
      };
      for (int j : active) {
        if (j == i) continue;
        const ObjectState& other = out.objects[static_cast<size_t>(j)];
        if (!bbox_overlap(obj.shape.bounding_box(), other.shape.bounding_box(), 0.0)) continue;
        consider(polygon_penetration(other.shape, obj.shape));
      }
      consider(polygon_penetration(body, obj.shape));
      if (found) {
        translate_object(obj, pick.axis * pick.depth);
        if (cfg.rotation) apply_rotation(obj, pick.axis, pick.depth);
      }
    }
  }
  if (!settled) throw SimulationError("contact projection did not settle within budget");
  return out;
}

SceneState simulate(const SceneState& state, const Action& action, const SimConfig& cfg) {
  if (action.kind == Action::Kind::Grasp) {
    const GraspAction& g = *action.grasp;
    if (g.object < 0 || g.object >= state.num_objects())
      throw SimulationError("grasp of an unknown object");
    SceneState out = state.with_object_at(g.object, g.placement);
    const ConvexPolygon& placed = out.objects[static_cast<size_t>(g.object)].shape;
    for (int j = 0; j < out.num_objects(); ++j) {
      if (j == g.object) continue;
      if (polygons_overlap(placed, out.objects[static_cast<size_t>(j)].shape))
        throw SimulationError("grasp placement overlaps an object");
    }
    out.gripper_pos = g.placement;
    return out;
  }

  const PushAction& p = *action.push;
  if (p.travel < 0.0) throw SimulationError("negative push travel");
  const Direction dir = Direction::of(p.direction);
  const Direction perp = dir.perp();
  const double alpha = dir.dot(p.anchor);
  const double beta = perp.dot(p.anchor);
  const double half = p.width * 0.5;
  auto body_at = [&](double a) {
    return ConvexPolygon({dir.vec() * (a - p.thickness) + perp.vec() * (beta - half),
                          dir.vec() * a + perp.vec() * (beta - half),
                          dir.vec() * a + perp.vec() * (beta + half),
                          dir.vec() * (a - p.thickness) + perp.vec() * (beta + half)});
  };
  {
    const ConvexPolygon start = body_at(alpha);
    for (int j = 0; j < state.num_objects(); ++j)
      if (polygons_overlap(start, state.objects[static_cast<size_t>(j)].shape))
        throw SimulationError("pusher start pose overlaps an object");
  }

  SceneState out = state;
  double t = 0.0;
  while (t < p.travel - 1e-12) {
    const double dt = std::min(cfg.increment, p.travel - t);
    out = step_push(out, body_at(alpha + t), dir, dt, cfg);
    t += dt;
  }
  out.gripper_pos = p.anchor + dir.vec() * p.travel;

  // Non-penetration invariant over the final state.
  for (int i = 0; i < out.num_objects(); ++i)
    for (int j = i + 1; j < out.num_objects(); ++j) {
      const auto& a = out.objects[static_cast<size_t>(i)];
      const auto& b = out.objects[static_cast<size_t>(j)];
      if (!bbox_overlap(a.shape.bounding_box(), b.shape.bounding_box(), 0.0)) continue;
      if (polygon_penetration(a.shape, b.shape).depth > cfg.tolerance)
        throw SimulationError("post-push state leaves residual penetration");
    }
  return out;
}

}  // namespace pushsort
