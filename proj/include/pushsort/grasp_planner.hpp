#pragma once

#include <optional>
#include <vector>

#include "pushsort/reachability.hpp"
#include "pushsort/scene.hpp"

namespace pushsort {

// One lattice point of the placement grid. Samples inside a region's
// admissible set carry that region's index; the rest are buffer candidates.
struct PlacementSample {
  int m = 0, n = 0;  // lattice indices, row-major identity of the sample
  Vec2 point;
  int region = -1;                  // S_j membership, -1 for external samples
  std::vector<double> region_dist;  // distance to every region polygon
  bool buffer_ok = false;           // satisfies the buffer proximity rule
};

// Placement lattice with spacing sqrt(2)*R over the reachable workspace
// bounding box, anchored at its minimum corner. A sample joins S_j when the
// 2R-ball around it fits inside region j and the point is reachable; a
// reachable sample strictly outside every region becomes a buffer candidate,
// marked buffer_ok when it sits closer to every region than that region's
// nearest sibling region. Object occupancy is not baked in; planners overlay
// it per query. The grid keeps a pointer to the map, which must outlive it.
class PlacementGrid {
 public:
  PlacementGrid(const SceneState& state, const ReachabilityMap& map);

  double spacing() const { return spacing_; }
  double object_radius() const { return radius_; }
  const std::vector<PlacementSample>& samples() const { return samples_; }
  int samples_in(int region) const { return region_counts_[region]; }
  const ReachabilityMap& map() const { return *map_; }

 private:
  double spacing_ = 0.0;
  double radius_ = 0.0;
  std::vector<PlacementSample> samples_;  // ascending (m, n)
  std::vector<int> region_counts_;
  const ReachabilityMap* map_;
};

struct BufferChoice {
  Vec2 point;
  int sample = -1;      // index into grid.samples()
  bool pseudo = false;  // proximity rule unsatisfiable, distances faked to 0
};

// Best buffer placement for the current object layout: a collision-free
// buffer candidate minimizing the summed region distances, ties to the
// smallest (m, n). Falls back to a pseudo buffer when no candidate satisfies
// the proximity rule; absent when every external sample is occupied.
std::optional<BufferChoice> find_buffer(const SceneState& state, const PlacementGrid& grid);

// Exact one-step greedy grasp: over all reachable objects and admissible free
// placements (region samples and the buffer), pick the one minimizing the
// post-grasp assignment cost (global mode) or the chosen region's share of it
// (target mode). Only strictly cost-reducing actions are returned; nullopt
// when none exists, in particular whenever the scene is already sorted.
// Ties prefer the smaller object index, then the smaller (m, n) sample, then
// region samples over the buffer.
std::optional<GraspAction> plan_grasp(const SceneState& state, const PlacementGrid& grid,
                                      PlanMode mode);

// One scan answering several modes at once (the high-level planner asks for
// every target region of one state). Result i corresponds to modes[i].
std::vector<std::optional<GraspAction>> plan_grasp_batch(const SceneState& state,
                                                         const PlacementGrid& grid,
                                                         const std::vector<PlanMode>& modes);

}  // namespace pushsort
