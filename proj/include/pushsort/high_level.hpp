#pragma once

#include <optional>
#include <vector>

#include "pushsort/push_planner.hpp"
#include "pushsort/reachability.hpp"
#include "pushsort/scene.hpp"
#include "pushsort/simulator.hpp"

namespace pushsort {

// Full expands every per-region grasp and push; GreedyPerRegion keeps, per
// region, whichever of the two has the better one-step rate (halving the
// branching factor).
enum class ExpandMode { Full, GreedyPerRegion };

struct HighLevelConfig {
  int horizon = 1;
  ExpandMode mode = ExpandMode::Full;
  bool use_push = true;  // false gives the grasp-only baseline
  PushPlannerConfig push;
  SimConfig sim;
};

// End-effector path length of one action: approach from the current gripper
// position plus in-action travel (carry length for a grasp, pusher travel for
// a push). Throws QueryError on unreachable waypoints.
double transit_cost(const SceneState& state, const Action& action, const ReachabilityMap& map);

// Cost reduction per meter of end-effector travel; higher is better. Throws
// QueryError when transit is not positive.
double j_rate(double root_j, double leaf_j, double transit);

struct Expansion {
  Action action;
  SceneState child;  // produced by simulate()
  double child_j = 0.0;
  double transit = 0.0;
  double rate = 0.0;  // one-step j_rate of this action
};

// Candidate actions from one state: per-region greedy grasps and pushes,
// simulated. Order: grasps by region ascending, then pushes by region
// ascending (Full); per region the better of the two (GreedyPerRegion, rate
// ties prefer the grasp). Empty at sorted states.
std::vector<Expansion> expand(const SceneState& state, const HighLevelConfig& config,
                              const ReachabilityMap& map);

// Depth-bounded exhaustive search: expand to the horizon, score every leaf by
// cumulative rate (root J minus leaf J over summed transit), and return the
// first action on the path to the best leaf. Leaves with no available action
// compete at their shallower depth; rate ties prefer shallower leaves, then
// the earlier path in expansion order. Absent when the root has no action.
std::optional<Action> plan_next_action(const SceneState& state, const HighLevelConfig& config,
                                       const ReachabilityMap& map);

struct TraceStep {
  Action action;
  double j_before = 0.0;
  double j_after = 0.0;
  double transit = 0.0;
  double wall_seconds = 0.0;  // planning time for this decision
  bool j_increased = false;   // simulate() deviated upward from the model
};

struct PlanTrace {
  std::vector<TraceStep> steps;
  SceneState final_state;
  bool complete = false;  // reached J = 0
  double total_transit = 0.0;
  double final_j = 0.0;
};

// Receding-horizon loop: plan, simulate, repeat until sorted, stuck, or out
// of budget. Incomplete traces are returned flagged, never dropped.
PlanTrace solve_task(const SceneState& state, const HighLevelConfig& config,
                     const ReachabilityMap& map, int budget);

}  // namespace pushsort
