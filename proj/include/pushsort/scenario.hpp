#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pushsort/high_level.hpp"
#include "pushsort/reachability.hpp"
#include "pushsort/scene.hpp"

namespace pushsort {

// Declarative description of one benchmark instance. Lengths in meters.
struct ScenarioSpec {
  std::uint64_t seed = 1;
  int objects = 50;     // N
  int regions = 2;      // T
  int categories = 1;   // C; categories == objects designates one goal per object
  double workspace = 2.0;  // square workspace side
  double object_side = 0.05;
  double region_height = 0.5;
  double blob_fraction = 0.3;  // object area over spawn-box area
  double pusher_width = 0.08;
  std::string map = "full";  // "full" or "rect:x0,y0,x1,y1"
  // Per region, per category. Left empty the generator derives them: an even
  // ceil(count/T) split, except categories == objects, which pins category k
  // to region k mod T with capacity one.
  std::vector<std::vector<int>> caps;
};

struct Scenario {
  ScenarioSpec spec;  // caps resolved
  SceneState state;
};

// Reachability map named by the spec's map string. Throws IoError on an
// unrecognized spec.
std::unique_ptr<ReachabilityMap> make_map(const ScenarioSpec& spec);

// Random instance: target regions in a gapped top row, objects rejection-
// sampled as a non-overlapping axis-aligned blob below them. Deterministic
// per seed. Throws InfeasibleTaskError when a million placement attempts
// cannot fit all objects (density too high).
Scenario generate_scenario(const ScenarioSpec& spec);

// Instance satisfying the grasp-completeness preconditions: every object
// reachable, every region holding over nine admissible samples per capacity
// slot, and a free buffer placement. Regions sit in workspace corners around
// a free center; object count is clamped to keep the sample surplus.
// Generate-and-verify, deterministic per seed.
Scenario generate_sparse_scenario(std::uint64_t seed, int objects, int regions);

// Four-region cyclic occupancy instance: each region admits exactly one
// placement sample, occupied by the object destined for the next region, so
// no direct placement exists and progress requires the central buffer.
Scenario make_cyclic_scenario();

std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& text);
void save_scenario(const Scenario& scenario, const std::string& path);
Scenario load_scenario(const std::string& path);

// Trace persistence. Wall-clock figures are kept out of the trace so its
// bytes depend only on (seed, config); save_timing writes them separately.
std::string trace_to_json(const PlanTrace& trace);
void save_trace(const PlanTrace& trace, const std::string& path);
void save_timing(const PlanTrace& trace, const std::string& path);
// Action sequence of a saved trace, for deterministic replay.
std::vector<Action> load_trace_actions(const std::string& path);

}  // namespace pushsort
