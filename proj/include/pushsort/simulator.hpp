#pragma once

#include "pushsort/geometry.hpp"
#include "pushsort/scene.hpp"

namespace pushsort {

// Quasi-static position-projection stepper: no velocities, no restitution;
// objects stop the moment nothing pushes them.
struct SimConfig {
  double increment = 0.002;  // pusher advance per step (m)
  int iterations = 32;       // contact projection sweeps per step
  double tolerance = 1e-6;   // admissible residual penetration (m)
  bool rotation = false;     // small-angle correction on off-center contacts
};

// Advance the pusher body by `advance` along dir and project all contacts:
// penetrated objects translate along the contact normal by the minimum
// separating distance, processed front-to-back along the push direction
// (ties toward smaller object index), sweeping until settled. Throws
// SimulationError when the iteration budget runs out with contacts unsettled.
SceneState step_push(const SceneState& state, const ConvexPolygon& pusher_body,
                     const Direction& dir, double advance, const SimConfig& cfg);

// Execute one planned action. Grasp teleports the object to its placement
// (rejecting placements that overlap another object); push sweeps the pusher
// in increments of cfg.increment. The gripper ends at the placement or at the
// pusher's final anchor. The returned state satisfies the non-penetration
// invariant; objects never contacted keep bit-identical poses.
SceneState simulate(const SceneState& state, const Action& action, const SimConfig& cfg);

}  // namespace pushsort
