#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pushsort/assignment.hpp"
#include "pushsort/bench.hpp"
#include "pushsort/errors.hpp"
#include "pushsort/high_level.hpp"
#include "pushsort/render.hpp"
#include "pushsort/scenario.hpp"

namespace {

using namespace pushsort;

// "5,3;4,4" -> rows per region, entries per category
std::vector<std::vector<int>> parse_caps(const std::string& text) {
  std::vector<std::vector<int>> caps;
  std::vector<int> row;
  int value = 0;
  bool have_digit = false;
  for (char ch : text + ";") {
    if (ch >= '0' && ch <= '9') {
      value = value * 10 + (ch - '0');
      have_digit = true;
    } else if (ch == ',' || ch == ';') {
      if (!have_digit) throw IoError("malformed caps string: " + text);
      row.push_back(value);
      value = 0;
      have_digit = false;
      if (ch == ';') {
        caps.push_back(row);
        row.clear();
      }
    } else {
      throw IoError("malformed caps string: " + text);
    }
  }
  return caps;
}

struct GenOptions {
  ScenarioSpec spec;
  std::string caps;
  std::string layout = "blob";
  std::string out;
};

int do_gen(const GenOptions& opt) {
  ScenarioSpec spec = opt.spec;
  if (!opt.caps.empty()) spec.caps = parse_caps(opt.caps);
  Scenario scenario;
  if (opt.layout == "blob")
    scenario = generate_scenario(spec);
  else if (opt.layout == "sparse")
    scenario = generate_sparse_scenario(spec.seed, spec.objects, spec.regions);
  else if (opt.layout == "cyclic")
    scenario = make_cyclic_scenario();
  else
    throw IoError("unknown layout: " + opt.layout);
  if (opt.out.empty())
    std::fputs(scenario_to_json(scenario).c_str(), stdout);
  else
    save_scenario(scenario, opt.out);
  return 0;
}

struct PlanOptions {
  std::string scenario;
  int horizon = 1;
  std::string mode = "greedy";
  bool no_push = false;
};

int do_plan(const PlanOptions& opt) {
  const Scenario scenario = load_scenario(opt.scenario);
  const std::unique_ptr<ReachabilityMap> map = make_map(scenario.spec);
  HighLevelConfig cfg;
  cfg.horizon = opt.horizon;
  cfg.use_push = !opt.no_push;
  cfg.push.pusher.width = scenario.spec.pusher_width;
  if (opt.mode == "full")
    cfg.mode = ExpandMode::Full;
  else if (opt.mode == "greedy")
    cfg.mode = ExpandMode::GreedyPerRegion;
  else
    throw IoError("unknown expansion mode: " + opt.mode);

  const auto t0 = std::chrono::steady_clock::now();
  const std::optional<Action> action = plan_next_action(scenario.state, cfg, *map);
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::fprintf(stderr, "planned in %.3f s\n", dt);

  if (!action) {
    if (compute_cost(scenario.state).total_cost == 0.0) {
      std::puts("already sorted");
      return 0;
    }
    std::puts("no improving action");
    return 2;
  }
  std::puts(describe(*action).c_str());
  return 0;
}

struct SolveOptions {
  std::string scenario;
  std::string variant = "push-h1";
  int budget = 0;
  std::string out;
  std::string timing;
};

int do_solve(const SolveOptions& opt) {
  const Scenario scenario = load_scenario(opt.scenario);
  const std::unique_ptr<ReachabilityMap> map = make_map(scenario.spec);
  const HighLevelConfig cfg = variant_config(variant_from_name(opt.variant), scenario.spec);
  const int budget = opt.budget > 0 ? opt.budget : 4 * scenario.spec.objects + 16;

  const PlanTrace trace = solve_task(scenario.state, cfg, *map, budget);
  if (!opt.out.empty()) save_trace(trace, opt.out);
  if (!opt.timing.empty()) save_timing(trace, opt.timing);
  std::printf("complete=%s actions=%zu transit=%.6f final_j=%.9f\n",
              trace.complete ? "true" : "false", trace.steps.size(), trace.total_transit,
              trace.final_j);
  if (trace.complete) return 0;
  return static_cast<int>(trace.steps.size()) >= budget ? 3 : 2;
}

struct BenchOptions {
  std::string config;
  std::string out;
  std::string timing;
  int threads = 0;
};

int do_bench(const BenchOptions& opt) {
  BenchConfig cfg = load_bench_config(opt.config);
  if (opt.threads > 0) cfg.threads = opt.threads;
  const BenchResult result = run_benchmark(cfg);
  const std::string metrics = metrics_to_json(cfg, result);
  if (opt.out.empty())
    std::fputs(metrics.c_str(), stdout);
  else {
    std::ofstream f(opt.out, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + opt.out);
    f << metrics;
    f.flush();
    if (!f) throw IoError("write failed: " + opt.out);
  }
  if (!opt.timing.empty()) {
    std::ofstream f(opt.timing, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + opt.timing);
    f << bench_timing_to_json(result);
    f.flush();
    if (!f) throw IoError("write failed: " + opt.timing);
  }
  return 0;
}

struct RenderOptions {
  std::string scenario;
  std::string trace;
  int step = -1;
  std::string out;
};

int do_render(const RenderOptions& opt) {
  const Scenario scenario = load_scenario(opt.scenario);
  SceneState state = scenario.state;
  std::optional<Action> overlay;
  if (!opt.trace.empty()) {
    const std::vector<Action> actions = load_trace_actions(opt.trace);
    const SimConfig sim;
    const int upto =
        opt.step >= 0 ? std::min<int>(opt.step, static_cast<int>(actions.size())) : static_cast<int>(actions.size());
    for (int i = 0; i < upto; ++i) state = simulate(state, actions[i], sim);
    if (opt.step >= 0 && opt.step < static_cast<int>(actions.size()))
      overlay = actions[static_cast<size_t>(opt.step)];
  }
  save_svg(state, overlay, opt.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planar object sorting with grasps and pushes"};
  app.require_subcommand(1);

  GenOptions gen_opt;
  CLI::App* gen = app.add_subcommand("gen", "generate a scenario file");
  gen->add_option("--seed", gen_opt.spec.seed, "random seed");
  gen->add_option("--n", gen_opt.spec.objects, "object count");
  gen->add_option("--t", gen_opt.spec.regions, "region count");
  gen->add_option("--c", gen_opt.spec.categories, "category count (= n designates per-object goals)");
  gen->add_option("--caps", gen_opt.caps, "explicit capacities, rows per region: \"5,3;4,4\"");
  gen->add_option("--pusher-width", gen_opt.spec.pusher_width, "pusher width in meters");
  gen->add_option("--map", gen_opt.spec.map, "reachability map: full | rect:x0,y0,x1,y1");
  gen->add_option("--blob-fraction", gen_opt.spec.blob_fraction, "object area over spawn-box area");
  gen->add_option("--layout", gen_opt.layout, "blob | sparse | cyclic");
  gen->add_option("--out", gen_opt.out, "output path (stdout when omitted)");

  PlanOptions plan_opt;
  CLI::App* plan = app.add_subcommand("plan", "plan a single decision");
  plan->add_option("--scenario", plan_opt.scenario, "scenario file")->required();
  plan->add_option("--horizon", plan_opt.horizon, "lookahead depth");
  plan->add_option("--mode", plan_opt.mode, "full | greedy");
  plan->add_flag("--no-push", plan_opt.no_push, "grasp actions only");

  SolveOptions solve_opt;
  CLI::App* solve = app.add_subcommand("solve", "solve a task end to end");
  solve->add_option("--scenario", solve_opt.scenario, "scenario file")->required();
  solve->add_option("--variant", solve_opt.variant, "grasp-only | push-h1 | push-h3");
  solve->add_option("--budget", solve_opt.budget, "action budget (0 picks 4n+16)");
  solve->add_option("--out", solve_opt.out, "trace output path");
  solve->add_option("--timing", solve_opt.timing, "timing sidecar path");

  BenchOptions bench_opt;
  CLI::App* bench = app.add_subcommand("bench", "run a benchmark config");
  bench->add_option("--config", bench_opt.config, "bench config file")->required();
  bench->add_option("--out", bench_opt.out, "metrics output path (stdout when omitted)");
  bench->add_option("--timing", bench_opt.timing, "timing sidecar path");
  bench->add_option("--threads", bench_opt.threads, "worker threads (overrides the config)");

  RenderOptions render_opt;
  CLI::App* render = app.add_subcommand("render", "render a scene snapshot");
  render->add_option("--scenario", render_opt.scenario, "scenario file")->required();
  render->add_option("--trace", render_opt.trace, "trace file to replay");
  render->add_option("--step", render_opt.step, "render before this step, action overlaid");
  render->add_option("--out", render_opt.out, "SVG output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return do_gen(gen_opt);
    if (*plan) return do_plan(plan_opt);
    if (*solve) return do_solve(solve_opt);
    if (*bench) return do_bench(bench_opt);
    if (*render) return do_render(render_opt);
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const InfeasibleTaskError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
