#include "pushsort/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <thread>
#include <utility>

#include "json.hpp"

#include "pushsort/assignment.hpp"
#include "pushsort/errors.hpp"
#include "pushsort/push_planner.hpp"

namespace pushsort {

namespace {

using ordered_json = nlohmann::ordered_json;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::GraspOnly:
      return "grasp-only";
    case Variant::PushH1:
      return "push-h1";
    case Variant::PushH3:
      return "push-h3";
  }
  return "?";
}

Variant variant_from_name(const std::string& name) {
  for (Variant v : {Variant::GraspOnly, Variant::PushH1, Variant::PushH3})
    if (name == variant_name(v)) return v;
  throw IoError("unknown variant: " + name);
}

HighLevelConfig variant_config(Variant v, const ScenarioSpec& spec) {
  HighLevelConfig cfg;
  cfg.push.pusher.width = spec.pusher_width;
  // Both push variants expand the per-region best action, which at horizon 1
  // selects the same action as the full child set, so the horizons compare
  // on equal footing.
  cfg.mode = ExpandMode::GreedyPerRegion;
  switch (v) {
    case Variant::GraspOnly:
      cfg.use_push = false;
      cfg.horizon = 1;
      break;
    case Variant::PushH1:
      cfg.horizon = 1;
      break;
    case Variant::PushH3:
      cfg.horizon = 3;
      break;
  }
  return cfg;
}

BenchResult run_benchmark(const BenchConfig& config) {
  std::vector<std::pair<std::uint64_t, Variant>> cells;
  for (std::uint64_t seed : config.seeds)
    for (Variant v : config.variants) cells.emplace_back(seed, v);

  BenchResult result;
  result.runs.resize(cells.size());
  std::vector<std::exception_ptr> failures(cells.size());

  std::atomic<size_t> cursor{0};
  auto worker = [&]() {
    for (size_t i; (i = cursor.fetch_add(1)) < cells.size();) {
      try {
        const auto [seed, variant] = cells[i];
        ScenarioSpec spec = config.base;
        spec.seed = seed;
        const Scenario scenario = generate_scenario(spec);
        const std::unique_ptr<ReachabilityMap> map = make_map(scenario.spec);
        const HighLevelConfig cfg = variant_config(variant, scenario.spec);
        const int budget = config.budget > 0 ? config.budget : 4 * spec.objects + 16;

        const auto t0 = std::chrono::steady_clock::now();
        const PlanTrace trace = solve_task(scenario.state, cfg, *map, budget);

        RunMetrics m;
        m.seed = seed;
        m.variant = variant;
        m.wall_seconds = seconds_since(t0);
        for (const TraceStep& s : trace.steps)
          (s.action.kind == Action::Kind::Grasp ? m.grasps : m.pushes)++;
        m.total_transit = trace.total_transit;
        m.final_j = trace.final_j;
        m.complete = trace.complete;
        result.runs[i] = m;
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  const int threads = std::max(1, config.threads);
  if (threads == 1 || cells.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const int count = std::min<int>(threads, static_cast<int>(cells.size()));
    pool.reserve(static_cast<size_t>(count));
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : failures)
    if (e) std::rethrow_exception(e);
  return result;
}

double action_speedup(const BenchResult& result, Variant baseline, Variant variant) {
  long base = 0, var = 0;
  for (const RunMetrics& m : result.runs) {
    const long actions = m.grasps + m.pushes;
    if (m.variant == baseline) base += actions;
    if (m.variant == variant) var += actions;
  }
  if (var == 0) throw QueryError("speedup over a variant with no actions");
  return static_cast<double>(base) / static_cast<double>(var);
}

std::string metrics_to_json(const BenchConfig& config, const BenchResult& result) {
  ordered_json j;
  j["format"] = "pushsort-metrics-v1";
  j["units"] = "m";

  ordered_json cfg;
  cfg["objects"] = config.base.objects;
  cfg["regions"] = config.base.regions;
  cfg["categories"] = config.base.categories;
  cfg["workspace"] = config.base.workspace;
  cfg["object_side"] = config.base.object_side;
  cfg["blob_fraction"] = config.base.blob_fraction;
  cfg["pusher_width"] = config.base.pusher_width;
  cfg["map"] = config.base.map;
  cfg["budget"] = config.budget;
  cfg["seeds"] = config.seeds;
  ordered_json names = ordered_json::array();
  for (Variant v : config.variants) names.push_back(variant_name(v));
  cfg["variants"] = std::move(names);
  j["config"] = std::move(cfg);

  ordered_json runs = ordered_json::array();
  for (const RunMetrics& m : result.runs) {
    ordered_json r;
    r["seed"] = m.seed;
    r["variant"] = variant_name(m.variant);
    r["actions"] = m.grasps + m.pushes;
    r["grasps"] = m.grasps;
    r["pushes"] = m.pushes;
    r["total_transit"] = m.total_transit;
    r["final_j"] = m.final_j;
    r["complete"] = m.complete;
    runs.push_back(std::move(r));
  }
  j["runs"] = std::move(runs);

  const bool has_baseline =
      std::find(config.variants.begin(), config.variants.end(), Variant::GraspOnly) !=
      config.variants.end();
  ordered_json speedups;
  if (has_baseline) {
    for (Variant v : config.variants) {
      if (v == Variant::GraspOnly) continue;
      speedups[std::string(variant_name(v)) + "_actions"] =
          action_speedup(result, Variant::GraspOnly, v);
    }
  }
  j["speedups"] = std::move(speedups);
  return j.dump(2) + "\n";
}

std::string bench_timing_to_json(const BenchResult& result) {
  ordered_json j;
  j["format"] = "pushsort-timing-v1";
  ordered_json runs = ordered_json::array();
  double total = 0.0;
  for (const RunMetrics& m : result.runs) {
    ordered_json r;
    r["seed"] = m.seed;
    r["variant"] = variant_name(m.variant);
    r["wall_seconds"] = m.wall_seconds;
    runs.push_back(std::move(r));
    total += m.wall_seconds;
  }
  j["total_wall_seconds"] = total;
  j["runs"] = std::move(runs);
  return j.dump(2) + "\n";
}

BenchConfig bench_config_from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) throw IoError("malformed JSON input");
  if (!j.is_object() || j.value("format", "") != "pushsort-bench-v1")
    throw IoError("expected a pushsort-bench-v1 document");
  try {
    BenchConfig cfg;
    cfg.base.objects = j.value("objects", cfg.base.objects);
    cfg.base.regions = j.value("regions", cfg.base.regions);
    cfg.base.categories = j.value("categories", cfg.base.categories);
    if (j.value("categories_per_object", false)) cfg.base.categories = cfg.base.objects;
    cfg.base.workspace = j.value("workspace", cfg.base.workspace);
    cfg.base.object_side = j.value("object_side", cfg.base.object_side);
    cfg.base.blob_fraction = j.value("blob_fraction", cfg.base.blob_fraction);
    cfg.base.pusher_width = j.value("pusher_width", cfg.base.pusher_width);
    cfg.base.map = j.value("map", cfg.base.map);
    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("variants")) {
      cfg.variants.clear();
      for (const auto& name : j.at("variants"))
        cfg.variants.push_back(variant_from_name(name.get<std::string>()));
    }
    cfg.budget = j.value("budget", cfg.budget);
    cfg.threads = j.value("threads", cfg.threads);
    return cfg;
  } catch (const ordered_json::exception& e) {
    throw IoError(std::string("malformed bench config: ") + e.what());
  }
}

BenchConfig load_bench_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path);
  return bench_config_from_json(text);
}

ScalingResult measure_push_scaling(const std::vector<int>& sizes, std::uint64_t seed,
                                   int repeats) {
  if (sizes.size() < 2) throw QueryError("scaling fit needs at least two sizes");
  if (repeats < 1) throw QueryError("scaling fit needs at least one repeat");

  ScalingResult out;
  for (int n : sizes) {
    ScenarioSpec spec;
    spec.seed = seed;
    spec.objects = n;
    spec.regions = 4;
    spec.categories = 1;
    const Scenario scenario = generate_scenario(spec);
    const std::unique_ptr<ReachabilityMap> map = make_map(scenario.spec);
    const Assignment assignment = compute_cost(scenario.state);
    PushPlannerConfig cfg;
    cfg.pusher.width = scenario.spec.pusher_width;
    std::vector<PlanMode> modes;
    for (int j = 0; j < spec.regions; ++j) modes.push_back(PlanMode::target(j));

    double best = 0.0;
    for (int r = 0; r < repeats; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      plan_push_batch(scenario.state, cfg, *map, assignment, modes);
      const double dt = seconds_since(t0);
      if (r == 0 || dt < best) best = dt;
    }
    out.points.push_back(ScalingPoint{n, std::max(best, 1e-7)});
  }

  double sx = 0.0, sy = 0.0;
  for (const ScalingPoint& p : out.points) {
    sx += std::log(static_cast<double>(p.objects));
    sy += std::log(p.seconds);
  }
  const double mx = sx / static_cast<double>(out.points.size());
  const double my = sy / static_cast<double>(out.points.size());
  double num = 0.0, den = 0.0;
  for (const ScalingPoint& p : out.points) {
    const double dx = std::log(static_cast<double>(p.objects)) - mx;
    num += dx * (std::log(p.seconds) - my);
    den += dx * dx;
  }
  out.exponent = num / den;
  return out;
}

}  // namespace pushsort
