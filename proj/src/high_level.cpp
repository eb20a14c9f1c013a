#include "pushsort/high_level.hpp"

#include <algorithm>
#include <chrono>
#include <utility>

#include "pushsort/assignment.hpp"
#include "pushsort/errors.hpp"
#include "pushsort/grasp_planner.hpp"

namespace pushsort {

namespace {

// Depth-bounded exhaustive lookahead. Leaves are scored lazily as the DFS
// reaches them, so the first leaf encountered at the best (rate, depth) wins
// every remaining tie.
struct Search {
  const HighLevelConfig* config = nullptr;
  const ReachabilityMap* map = nullptr;
  double root_j = 0.0;
  long long leaves = 0;
  long long leaf_cap = 0;

  bool found = false;
  double best_rate = 0.0;
  int best_depth = 0;
  Action best_first;

  void score_leaf(double leaf_j, double path_transit, int depth, const Action& first) {
    if (++leaves > leaf_cap)
      throw StructuralError("lookahead produced more leaves than the branching bound allows");
    const double rate = j_rate(root_j, leaf_j, path_transit);
    // Only paths that actually lower the cost count. Pseudo-buffer grasps
    // claim improvement by fiat, and executing them when nothing real is
    // available just shuffles an object back and forth; deeper lookahead may
    // still route through one as long as the whole path pays off.
    if (!(rate > 0.0)) return;
    if (!found || rate > best_rate || (rate == best_rate && depth < best_depth)) {
      found = true;
      best_rate = rate;
      best_depth = depth;
      best_first = first;
    }
  }

  // `first` is the root action of the current path, null at the root itself.
  void descend(const SceneState& state, double state_j, int depth, double path_transit,
               const Action* first) {
    std::vector<Expansion> kids;
    if (depth < config->horizon) kids = expand(state, *config, *map);
    if (kids.empty()) {
      if (first != nullptr) score_leaf(state_j, path_transit, depth, *first);
      return;  // the root has no action; the caller reports that
    }
    for (const Expansion& kid : kids) {
      const Action& root_action = first != nullptr ? *first : kid.action;
      descend(kid.child, kid.child_j, depth + 1, path_transit + kid.transit, &root_action);
    }
  }
};

}  // namespace

double transit_cost(const SceneState& state, const Action& action, const ReachabilityMap& map) {
  if (action.kind == Action::Kind::Grasp) {
    const GraspAction& g = *action.grasp;
    const Vec2 pick = state.objects[g.object].center;
    return map.traj(state.gripper_pos, pick) + map.traj(pick, g.placement);
  }
  const PushAction& p = *action.push;
  return map.traj(state.gripper_pos, p.anchor) + p.travel;
}

double j_rate(double root_j, double leaf_j, double transit) {
  if (!(transit > 0.0)) throw QueryError("rate of a path with non-positive transit");
  return (root_j - leaf_j) / transit;
}

std::vector<Expansion> expand(const SceneState& state, const HighLevelConfig& config,
                              const ReachabilityMap& map) {
  const int regions = state.num_regions();
  std::vector<PlanMode> modes;
  modes.reserve(regions);
  for (int j = 0; j < regions; ++j) modes.push_back(PlanMode::target(j));

  const Assignment assignment = compute_cost(state);
  const double j_here = assignment.total_cost;

  const PlacementGrid grid(state, map);
  const std::vector<std::optional<GraspAction>> grasps = plan_grasp_batch(state, grid, modes);
  std::vector<std::optional<PushAction>> pushes(modes.size());
  if (config.use_push) pushes = plan_push_batch(state, config.push, map, assignment, modes);

  auto realize = [&](Action act) {
    Expansion e;
    e.transit = transit_cost(state, act, map);
    e.child = simulate(state, act, config.sim);
    e.child_j = compute_cost(e.child).total_cost;
    e.rate = j_rate(j_here, e.child_j, e.transit);
    e.action = std::move(act);
    return e;
  };

  std::vector<Expansion> out;
  if (config.mode == ExpandMode::Full) {
    for (int j = 0; j < regions; ++j)
      if (grasps[j]) out.push_back(realize(Action::of(*grasps[j])));
    for (int j = 0; j < regions; ++j)
      if (pushes[j]) out.push_back(realize(Action::of(*pushes[j])));
    return out;
  }
  for (int j = 0; j < regions; ++j) {
    std::optional<Expansion> g, p;
    if (grasps[j]) g = realize(Action::of(*grasps[j]));
    if (pushes[j]) p = realize(Action::of(*pushes[j]));
    if (g && p)
      out.push_back(p->rate > g->rate ? std::move(*p) : std::move(*g));
    else if (g)
      out.push_back(std::move(*g));
    else if (p)
      out.push_back(std::move(*p));
  }
  return out;
}

std::optional<Action> plan_next_action(const SceneState& state, const HighLevelConfig& config,
                                       const ReachabilityMap& map) {
  if (config.horizon < 1) throw StructuralError("planning horizon must be at least 1");

  Search search;
  search.config = &config;
  search.map = &map;
  search.root_j = compute_cost(state).total_cost;

  const long long branch = 2LL * std::max(1, state.num_regions());
  constexpr long long kLeafCapCeiling = 1LL << 40;
  search.leaf_cap = 1;
  for (int h = 0; h < config.horizon; ++h) {
    if (search.leaf_cap >= kLeafCapCeiling / branch) {
      search.leaf_cap = kLeafCapCeiling;
      break;
    }
    search.leaf_cap *= branch;
  }

  search.descend(state, search.root_j, 0, 0.0, nullptr);
  if (!search.found) return std::nullopt;
  return search.best_first;
}

PlanTrace solve_task(const SceneState& state, const HighLevelConfig& config,
                     const ReachabilityMap& map, int budget) {
  if (budget < 0) throw QueryError("negative action budget");

  PlanTrace trace;
  SceneState cur = state;
  double j = compute_cost(cur).total_cost;
  while (true) {
    if (j == 0.0) {
      trace.complete = true;
      break;
    }
    if (static_cast<int>(trace.steps.size()) >= budget) break;

    const auto t0 = std::chrono::steady_clock::now();
    const std::optional<Action> act = plan_next_action(cur, config, map);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!act) break;

    TraceStep step;
    step.action = *act;
    step.j_before = j;
    step.transit = transit_cost(cur, *act, map);
    step.wall_seconds = wall;
    cur = simulate(cur, *act, config.sim);
    j = compute_cost(cur).total_cost;
    step.j_after = j;
    step.j_increased = step.j_after > step.j_before + 1e-12;
    trace.total_transit += step.transit;
    trace.steps.push_back(std::move(step));
  }
  trace.final_state = std::move(cur);
  trace.final_j = j;
  return trace;
}

}  // namespace pushsort
