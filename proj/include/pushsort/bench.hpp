#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pushsort/high_level.hpp"
#include "pushsort/scenario.hpp"

namespace pushsort {

enum class Variant { GraspOnly, PushH1, PushH3 };

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);
HighLevelConfig variant_config(Variant v, const ScenarioSpec& spec);

struct RunMetrics {
  std::uint64_t seed = 0;
  Variant variant = Variant::GraspOnly;
  int grasps = 0;
  int pushes = 0;
  double total_transit = 0.0;
  double final_j = 0.0;
  bool complete = false;
  double wall_seconds = 0.0;  // planning time; reported only in the timing sidecar
};

struct BenchConfig {
  ScenarioSpec base;  // seed is overridden per run
  std::vector<std::uint64_t> seeds = {1};
  std::vector<Variant> variants = {Variant::GraspOnly, Variant::PushH1, Variant::PushH3};
  int budget = 0;   // action budget per run; 0 picks 4N + 16
  int threads = 1;  // worker count; the result order never depends on it
};

struct BenchResult {
  std::vector<RunMetrics> runs;  // seed-major, variant-minor
};

// Solves every (seed, variant) cell. Runs execute in parallel up to
// config.threads; results land in a fixed order so the output bytes are
// independent of the parallelism level.
BenchResult run_benchmark(const BenchConfig& config);

// Total actions of the baseline over total actions of the variant, across
// all seeds the result holds.
double action_speedup(const BenchResult& result, Variant baseline, Variant variant);

// Metrics table without wall-clock figures; the sidecar carries those.
std::string metrics_to_json(const BenchConfig& config, const BenchResult& result);
std::string bench_timing_to_json(const BenchResult& result);

BenchConfig bench_config_from_json(const std::string& text);
BenchConfig load_bench_config(const std::string& path);

// Push-planner wall time against object count on generated scenes, plus the
// least-squares slope of log(time) over log(N).
struct ScalingPoint {
  int objects = 0;
  double seconds = 0.0;
};
struct ScalingResult {
  std::vector<ScalingPoint> points;
  double exponent = 0.0;
};
ScalingResult measure_push_scaling(const std::vector<int>& sizes, std::uint64_t seed,
                                   int repeats = 3);

}  // namespace pushsort
