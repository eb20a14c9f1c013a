#include "pushsort/scene.hpp"

#include <algorithm>
#include <cstdio>

#include "pushsort/errors.hpp"

namespace pushsort {

ObjectState make_object(ConvexPolygon shape, Vec2 center, int label) {
  double r = 0.0;
  for (Vec2 v : shape.vertices()) r = std::max(r, dist(v, center));
  return ObjectState{std::move(shape), center, label, r};
}

double SceneState::max_radius() const {
  double r = 0.0;
  for (const ObjectState& o : objects) r = std::max(r, o.radius);
  return r;
}

SceneState SceneState::with_object_at(int i, Vec2 p) const {
  SceneState next = *this;
  ObjectState& obj = next.objects[static_cast<size_t>(i)];
  obj.shape = obj.shape.translated(p - obj.center);
  obj.center = p;
  return next;
}

std::vector<int> SceneState::category_counts() const {
  std::vector<int> counts(static_cast<size_t>(num_categories), 0);
  for (const ObjectState& o : objects) counts[static_cast<size_t>(o.label)]++;
  return counts;
}

void validate_scene(const SceneState& state) {
  if (state.num_categories < 1) throw StructuralError("scene needs at least one category");
  for (int i = 0; i < state.num_objects(); ++i) {
    const ObjectState& o = state.objects[static_cast<size_t>(i)];
    if (o.label < 0 || o.label >= state.num_categories) {
      throw StructuralError("object " + std::to_string(i) + " label " +
                            std::to_string(o.label) + " out of range");
    }
    double r = 0.0;
    for (Vec2 v : o.shape.vertices()) r = std::max(r, dist(v, o.center));
    if (o.radius < r - kGeomTol) {
      throw StructuralError("object " + std::to_string(i) + " radius below vertex extent");
    }
  }
  for (const TargetRegion& t : state.regions) {
    if (static_cast<int>(t.capacities.size()) != state.num_categories) {
      throw StructuralError("region capacity vector size != category count");
    }
    for (int c : t.capacities) {
      if (c < 0) throw StructuralError("negative region capacity");
    }
  }
  std::vector<int> counts = state.category_counts();
  for (int k = 0; k < state.num_categories; ++k) {
    int cap = 0;
    for (const TargetRegion& t : state.regions) cap += t.capacities[static_cast<size_t>(k)];
    if (cap < counts[static_cast<size_t>(k)]) {
      throw InfeasibleTaskError("category " + std::to_string(k) + " has " +
                                std::to_string(counts[static_cast<size_t>(k)]) +
                                " objects but total capacity " + std::to_string(cap));
    }
  }
  for (int i = 0; i < state.num_objects(); ++i) {
    for (int j = i + 1; j < state.num_objects(); ++j) {
      const ObjectState& a = state.objects[static_cast<size_t>(i)];
      const ObjectState& b = state.objects[static_cast<size_t>(j)];
      if (dist(a.center, b.center) > a.radius + b.radius) continue;
      if (polygons_overlap(a.shape, b.shape)) {
        throw InfeasibleTaskError("objects " + std::to_string(i) + " and " +
                                  std::to_string(j) + " overlap");
      }
    }
  }
}

std::string describe(const Action& action) {
  if (action.kind == Action::Kind::Grasp) {
    const GraspAction& g = *action.grasp;
    char buf[128];
    std::snprintf(buf, sizeof buf, "grasp object %d -> (%.3f, %.3f)%s%s", g.object,
                  g.placement.x, g.placement.y, g.to_buffer ? " [buffer]" : "",
                  g.pseudo_buffer ? " [pseudo]" : "");
    return buf;
  }
  const PushAction& p = *action.push;
  char buf[128];
  std::snprintf(buf, sizeof buf, "push dir %d anchor (%.3f, %.3f) travel %.3f affecting %d objects",
                p.direction_index, p.anchor.x, p.anchor.y, p.travel,
                static_cast<int>(p.affected.size()));
  return buf;
}

}  // namespace pushsort
