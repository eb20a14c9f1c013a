#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pushsort/geometry.hpp"

namespace pushsort {

// A movable object: convex shape in world coordinates plus its reference
// center and category label. radius bounds the shape around the center and is
// derived from the vertices at construction.
struct ObjectState {
  ConvexPolygon shape;
  Vec2 center;
  int label = 0;
  double radius = 0.0;
};

ObjectState make_object(ConvexPolygon shape, Vec2 center, int label);

// Target region with per-category capacities (capacities.size() == number of
// categories in the scene).
struct TargetRegion {
  ConvexPolygon polygon;
  std::vector<int> capacities;
};

struct SceneState {
  std::vector<ObjectState> objects;
  std::vector<TargetRegion> regions;
  Vec2 gripper_pos{0.0, 0.0};
  int num_categories = 1;

  int num_objects() const { return static_cast<int>(objects.size()); }
  int num_regions() const { return static_cast<int>(regions.size()); }

  // Largest object bounding radius (R). Zero for an empty scene.
  double max_radius() const;

  // Copy with object i recentered at p (shape translated accordingly).
  SceneState with_object_at(int i, Vec2 p) const;

  // Count of objects per category.
  std::vector<int> category_counts() const;
};

// Structural checks on a freshly loaded or generated scene: labels in range,
// region capacity covers every category, object interiors pairwise disjoint,
// capacities non-negative. Throws StructuralError or InfeasibleTaskError.
void validate_scene(const SceneState& state);

// Grasp: pick up object and place it at `placement`, assigned to
// `region` (or to the buffer when `to_buffer`; `region` is then the region
// the buffered object is accounted against).
struct GraspAction {
  int object = 0;
  Vec2 placement;
  int region = 0;
  bool to_buffer = false;
  bool pseudo_buffer = false;  // buffer fallback that fakes zero distances
  double predicted_cost = 0.0;  // assignment cost after the action
};

// Push: place the pusher at the anchor and advance `travel` meters along the
// direction. Affected objects and their predicted displacements come from the
// kinematic push model.
struct PushAction {
  int direction_index = 0;
  Vec2 direction;
  Vec2 anchor;  // support of the pusher's front face along the direction
  double travel = 0.0;
  double width = 0.08;      // pusher geometry, carried for the simulator
  double thickness = 0.02;
  std::vector<int> affected;
  std::vector<double> displacements;  // per affected object, same order
  double predicted_cost = 0.0;        // assignment cost after the action
};

struct Action {
  enum class Kind { Grasp, Push };
  Kind kind = Kind::Grasp;
  std::optional<GraspAction> grasp;
  std::optional<PushAction> push;

  static Action of(GraspAction g) { return Action{Kind::Grasp, std::move(g), std::nullopt}; }
  static Action of(PushAction p) { return Action{Kind::Push, std::nullopt, std::move(p)}; }
};

std::string describe(const Action& action);

// Planner objective: reduce the global assignment cost, or only the share of
// one target region.
struct PlanMode {
  int region = -1;  // -1 selects the global objective

  static PlanMode global() { return {}; }
  static PlanMode target(int region) { return {region}; }
  bool is_global() const { return region < 0; }
};

}  // namespace pushsort
