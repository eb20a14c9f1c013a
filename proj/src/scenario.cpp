#include "pushsort/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <utility>

#include "json.hpp"

#include "pushsort/errors.hpp"
#include "pushsort/grasp_planner.hpp"

namespace pushsort {

namespace {

using ordered_json = nlohmann::ordered_json;

ConvexPolygon rect(double x0, double y0, double x1, double y1) {
  return ConvexPolygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

ConvexPolygon square_at(Vec2 c, double side) {
  const double h = side / 2.0;
  return rect(c.x - h, c.y - h, c.x + h, c.y + h);
}

std::vector<int> derive_labels(const ScenarioSpec& spec) {
  std::vector<int> labels(static_cast<size_t>(spec.objects), 0);
  if (spec.categories == spec.objects) {
    for (int i = 0; i < spec.objects; ++i) labels[static_cast<size_t>(i)] = i;
  } else if (spec.categories == 2) {
    // the benchmark grid's 80/20 split between two categories
    const int first = static_cast<int>(std::llround(0.8 * spec.objects));
    for (int i = 0; i < spec.objects; ++i) labels[static_cast<size_t>(i)] = i < first ? 0 : 1;
  } else {
    for (int i = 0; i < spec.objects; ++i) labels[static_cast<size_t>(i)] = i % spec.categories;
  }
  return labels;
}

std::vector<std::vector<int>> derive_caps(const ScenarioSpec& spec,
                                          const std::vector<int>& labels) {
  if (!spec.caps.empty()) return spec.caps;
  std::vector<std::vector<int>> caps(static_cast<size_t>(spec.regions),
                                     std::vector<int>(static_cast<size_t>(spec.categories), 0));
  if (spec.categories == spec.objects) {
    for (int k = 0; k < spec.categories; ++k)
      caps[static_cast<size_t>(k % spec.regions)][static_cast<size_t>(k)] = 1;
    return caps;
  }
  std::vector<int> counts(static_cast<size_t>(spec.categories), 0);
  for (int l : labels) counts[static_cast<size_t>(l)]++;
  for (auto& row : caps)
    for (int k = 0; k < spec.categories; ++k)
      row[static_cast<size_t>(k)] =
          (counts[static_cast<size_t>(k)] + spec.regions - 1) / spec.regions;
  return caps;
}

std::vector<ConvexPolygon> top_row_regions(const ScenarioSpec& spec) {
  const double margin = 0.05, gap = 0.1;
  const int t = spec.regions;
  const double w = std::min(1.0, (spec.workspace - 2 * margin - (t - 1) * gap) / t);
  if (w <= 0.0) throw StructuralError("too many regions for the workspace width");
  const double x0 = (spec.workspace - (t * w + (t - 1) * gap)) / 2.0;
  const double y1 = spec.workspace - margin;
  std::vector<ConvexPolygon> out;
  out.reserve(static_cast<size_t>(t));
  for (int j = 0; j < t; ++j) {
    const double xa = x0 + j * (w + gap);
    out.push_back(rect(xa, y1 - spec.region_height, xa + w, y1));
  }
  return out;
}

// Axis-aligned square centers with pairwise clearance, rejection-sampled
// inside [lo, hi] (center bounds). Shared attempt budget of one million.
std::vector<Vec2> sample_centers(std::mt19937_64& rng, int count, double side, Vec2 lo, Vec2 hi) {
  if (!(lo.x < hi.x) || !(lo.y < hi.y))
    throw InfeasibleTaskError("spawn box too small for the object size");
  std::uniform_real_distribution<double> ux(lo.x, hi.x), uy(lo.y, hi.y);
  const double clear = side + 1e-4;
  std::vector<Vec2> centers;
  centers.reserve(static_cast<size_t>(count));
  int attempts = 0;
  while (static_cast<int>(centers.size()) < count) {
    if (++attempts > 1'000'000)
      throw InfeasibleTaskError("object density too high: a million placement attempts failed");
    const Vec2 c{ux(rng), uy(rng)};
    bool ok = true;
    for (Vec2 o : centers) {
      if (std::abs(o.x - c.x) < clear && std::abs(o.y - c.y) < clear) {
        ok = false;
        break;
      }
    }
    if (ok) centers.push_back(c);
  }
  return centers;
}

SceneState assemble(const ScenarioSpec& spec, const std::vector<ConvexPolygon>& region_polys,
                    const std::vector<std::vector<int>>& caps, const std::vector<Vec2>& centers,
                    const std::vector<int>& labels) {
  SceneState state;
  state.num_categories = spec.categories;
  state.gripper_pos = Vec2{spec.workspace / 2.0, 0.05};
  for (size_t j = 0; j < region_polys.size(); ++j)
    state.regions.push_back(TargetRegion{region_polys[j], caps[j]});
  for (size_t i = 0; i < centers.size(); ++i)
    state.objects.push_back(make_object(square_at(centers[i], spec.object_side), centers[i],
                                        labels[i]));
  validate_scene(state);
  return state;
}

void check_spec(const ScenarioSpec& spec) {
  if (spec.objects < 1 || spec.regions < 1 || spec.categories < 1 ||
      spec.categories > spec.objects || spec.workspace <= 0.0 || spec.object_side <= 0.0 ||
      spec.blob_fraction <= 0.0 || spec.blob_fraction > 0.7)
    throw StructuralError("scenario spec out of range");
  if (!spec.caps.empty()) {
    if (static_cast<int>(spec.caps.size()) != spec.regions)
      throw StructuralError("caps rows != region count");
    for (const auto& row : spec.caps)
      if (static_cast<int>(row.size()) != spec.categories)
        throw StructuralError("caps row size != category count");
  }
}

ordered_json vec_json(Vec2 v) { return ordered_json::array({v.x, v.y}); }

Vec2 vec_from(const ordered_json& a) {
  return Vec2{a.at(0).get<double>(), a.at(1).get<double>()};
}

ordered_json poly_json(const ConvexPolygon& p) {
  ordered_json a = ordered_json::array();
  for (Vec2 v : p.vertices()) a.push_back(vec_json(v));
  return a;
}

ConvexPolygon poly_from(const ordered_json& a) {
  std::vector<Vec2> vs;
  vs.reserve(a.size());
  for (const auto& v : a) vs.push_back(vec_from(v));
  return ConvexPolygon(vs);
}

ordered_json scene_json(const SceneState& s) {
  ordered_json j;
  j["gripper"] = vec_json(s.gripper_pos);
  j["categories"] = s.num_categories;
  ordered_json regions = ordered_json::array();
  for (const TargetRegion& t : s.regions) {
    ordered_json r;
    r["polygon"] = poly_json(t.polygon);
    r["capacities"] = t.capacities;
    regions.push_back(std::move(r));
  }
  j["regions"] = std::move(regions);
  ordered_json objects = ordered_json::array();
  for (const ObjectState& o : s.objects) {
    ordered_json e;
    e["label"] = o.label;
    e["center"] = vec_json(o.center);
    e["polygon"] = poly_json(o.shape);
    objects.push_back(std::move(e));
  }
  j["objects"] = std::move(objects);
  return j;
}

SceneState scene_from(const ordered_json& j) {
  SceneState s;
  s.gripper_pos = vec_from(j.at("gripper"));
  s.num_categories = j.at("categories").get<int>();
  for (const auto& r : j.at("regions"))
    s.regions.push_back(
        TargetRegion{poly_from(r.at("polygon")), r.at("capacities").get<std::vector<int>>()});
  for (const auto& e : j.at("objects"))
    s.objects.push_back(make_object(poly_from(e.at("polygon")), vec_from(e.at("center")),
                                    e.at("label").get<int>()));
  validate_scene(s);
  return s;
}

ordered_json action_json(const Action& a) {
  ordered_json j;
  if (a.kind == Action::Kind::Grasp) {
    const GraspAction& g = *a.grasp;
    j["kind"] = "grasp";
    j["object"] = g.object;
    j["placement"] = vec_json(g.placement);
    j["region"] = g.region;
    j["to_buffer"] = g.to_buffer;
    j["pseudo_buffer"] = g.pseudo_buffer;
    j["predicted_cost"] = g.predicted_cost;
  } else {
    const PushAction& p = *a.push;
    j["kind"] = "push";
    j["direction_index"] = p.direction_index;
    j["direction"] = vec_json(p.direction);
    j["anchor"] = vec_json(p.anchor);
    j["travel"] = p.travel;
    j["width"] = p.width;
    j["thickness"] = p.thickness;
    j["affected"] = p.affected;
    j["displacements"] = p.displacements;
    j["predicted_cost"] = p.predicted_cost;
  }
  return j;
}

Action action_from(const ordered_json& j) {
  if (j.at("kind") == "grasp") {
    GraspAction g;
    g.object = j.at("object").get<int>();
    g.placement = vec_from(j.at("placement"));
    g.region = j.at("region").get<int>();
    g.to_buffer = j.at("to_buffer").get<bool>();
    g.pseudo_buffer = j.at("pseudo_buffer").get<bool>();
    g.predicted_cost = j.at("predicted_cost").get<double>();
    return Action::of(std::move(g));
  }
  PushAction p;
  p.direction_index = j.at("direction_index").get<int>();
  p.direction = vec_from(j.at("direction"));
  p.anchor = vec_from(j.at("anchor"));
  p.travel = j.at("travel").get<double>();
  p.width = j.at("width").get<double>();
  p.thickness = j.at("thickness").get<double>();
  p.affected = j.at("affected").get<std::vector<int>>();
  p.displacements = j.at("displacements").get<std::vector<double>>();
  p.predicted_cost = j.at("predicted_cost").get<double>();
  return Action::of(std::move(p));
}

ordered_json spec_json(const ScenarioSpec& spec) {
  ordered_json j;
  j["seed"] = spec.seed;
  j["objects"] = spec.objects;
  j["regions"] = spec.regions;
  j["categories"] = spec.categories;
  j["workspace"] = spec.workspace;
  j["object_side"] = spec.object_side;
  j["region_height"] = spec.region_height;
  j["blob_fraction"] = spec.blob_fraction;
  j["pusher_width"] = spec.pusher_width;
  j["map"] = spec.map;
  j["caps"] = spec.caps;
  return j;
}

ScenarioSpec spec_from(const ordered_json& j) {
  ScenarioSpec spec;
  spec.seed = j.at("seed").get<std::uint64_t>();
  spec.objects = j.at("objects").get<int>();
  spec.regions = j.at("regions").get<int>();
  spec.categories = j.at("categories").get<int>();
  spec.workspace = j.at("workspace").get<double>();
  spec.object_side = j.at("object_side").get<double>();
  spec.region_height = j.at("region_height").get<double>();
  spec.blob_fraction = j.at("blob_fraction").get<double>();
  spec.pusher_width = j.at("pusher_width").get<double>();
  spec.map = j.at("map").get<std::string>();
  spec.caps = j.at("caps").get<std::vector<std::vector<int>>>();
  return spec;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path);
  return text;
}

void spit(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

ordered_json parse_checked(const std::string& text, const char* format) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) throw IoError("malformed JSON input");
  if (!j.is_object() || j.value("format", "") != format)
    throw IoError(std::string("expected a ") + format + " document");
  return j;
}

}  // namespace

std::unique_ptr<ReachabilityMap> make_map(const ScenarioSpec& spec) {
  if (spec.map == "full")
    return std::make_unique<ConvexMap>(rect(0.0, 0.0, spec.workspace, spec.workspace));
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  if (std::sscanf(spec.map.c_str(), "rect:%lf,%lf,%lf,%lf", &x0, &y0, &x1, &y1) == 4) {
    if (!(x0 < x1 && y0 < y1)) throw IoError("degenerate rect map: " + spec.map);
    return std::make_unique<ConvexMap>(rect(x0, y0, x1, y1));
  }
  throw IoError("unrecognized map spec: " + spec.map);
}

Scenario generate_scenario(const ScenarioSpec& spec_in) {
  ScenarioSpec spec = spec_in;
  check_spec(spec);
  std::mt19937_64 rng(spec.seed);

  const std::vector<ConvexPolygon> region_polys = top_row_regions(spec);
  const std::vector<int> labels = derive_labels(spec);
  spec.caps = derive_caps(spec, labels);

  // Spawn box: a square sized by the density target, centered under the
  // regions and clamped into the free band of the workspace.
  const double margin = 0.05;
  const double a = spec.object_side;
  const double region_bottom = spec.workspace - margin - spec.region_height;
  const double band_top = region_bottom - 0.05;
  const double b = std::sqrt(spec.objects * a * a / spec.blob_fraction);
  const double bw = std::min(b, spec.workspace - 2 * margin);
  const double bh = std::min(b, band_top - margin);
  double x0 = (spec.workspace - bw) / 2.0;
  double y1 = std::min(0.45 * spec.workspace + bh / 2.0, band_top);
  double y0 = std::max(y1 - bh, margin);
  const std::vector<Vec2> centers = sample_centers(
      rng, spec.objects, a, Vec2{x0 + a / 2.0, y0 + a / 2.0},
      Vec2{x0 + bw - a / 2.0, y0 + bh - a / 2.0});

  return Scenario{spec, assemble(spec, region_polys, spec.caps, centers, labels)};
}

Scenario generate_sparse_scenario(std::uint64_t seed, int objects, int regions) {
  if (regions < 1 || regions > 4)
    throw StructuralError("the corner layout supports one to four regions");
  const Vec2 anchors[4] = {{0.3, 0.3}, {1.7, 0.3}, {1.7, 1.7}, {0.3, 1.7}};
  const double region_side = 0.5;

  ScenarioSpec spec;
  spec.seed = seed;
  spec.regions = regions;
  spec.categories = 1;
  // Five capacity slots per region keep the 49-sample regions above the
  // nine-samples-per-slot surplus the completeness argument needs.
  spec.objects = std::min(objects, 5 * regions);
  std::vector<ConvexPolygon> region_polys;
  for (int j = 0; j < regions; ++j) region_polys.push_back(square_at(anchors[j], region_side));
  const int per_region = (spec.objects + regions - 1) / regions;
  spec.caps.assign(static_cast<size_t>(regions), {per_region});

  const std::unique_ptr<ReachabilityMap> map = make_map(spec);
  std::mt19937_64 rng(seed);
  const std::vector<int> labels(static_cast<size_t>(spec.objects), 0);
  for (int round = 0; round < 100; ++round) {
    const std::vector<Vec2> centers =
        sample_centers(rng, spec.objects, spec.object_side, Vec2{0.1, 0.1}, Vec2{1.9, 1.9});
    const SceneState state = assemble(spec, region_polys, spec.caps, centers, labels);
    const PlacementGrid grid(state, *map);
    bool ok = true;
    for (int j = 0; j < regions && ok; ++j)
      if (grid.samples_in(j) <= 9 * per_region) ok = false;
    for (const ObjectState& o : state.objects)
      if (!map->reach(o.center)) ok = false;
    const std::optional<BufferChoice> buffer = find_buffer(state, grid);
    if (!buffer || buffer->pseudo) ok = false;
    if (ok) return Scenario{spec, state};
  }
  throw StructuralError("could not satisfy the sparse-instance preconditions");
}

Scenario make_cyclic_scenario() {
  const Vec2 centers[4] = {{0.25, 0.25}, {1.75, 0.25}, {1.75, 1.75}, {0.25, 1.75}};
  const double region_side = 0.15;

  ScenarioSpec spec;
  spec.seed = 0;
  spec.objects = 4;
  spec.regions = 4;
  spec.categories = 4;

  SceneState state;
  state.num_categories = 4;
  state.gripper_pos = Vec2{1.0, 0.05};
  for (int j = 0; j < 4; ++j)
    state.regions.push_back(TargetRegion{square_at(centers[j], region_side),
                                         std::vector<int>(4, 0)});
  for (int k = 0; k < 4; ++k) {
    // object k sits on region k's only sample and belongs in the next corner
    state.regions[static_cast<size_t>((k + 1) % 4)].capacities[static_cast<size_t>(k)] = 1;
    state.objects.push_back(
        make_object(square_at(centers[k], spec.object_side), centers[k], k));
  }
  validate_scene(state);
  spec.caps.clear();
  for (const TargetRegion& r : state.regions) spec.caps.push_back(r.capacities);
  return Scenario{spec, state};
}

std::string scenario_to_json(const Scenario& scenario) {
  ordered_json j;
  j["format"] = "pushsort-scenario-v1";
  j["units"] = "m";
  j["spec"] = spec_json(scenario.spec);
  j["scene"] = scene_json(scenario.state);
  return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
  try {
    const ordered_json j = parse_checked(text, "pushsort-scenario-v1");
    return Scenario{spec_from(j.at("spec")), scene_from(j.at("scene"))};
  } catch (const ordered_json::exception& e) {
    throw IoError(std::string("malformed scenario file: ") + e.what());
  }
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  spit(scenario_to_json(scenario), path);
}

Scenario load_scenario(const std::string& path) { return scenario_from_json(slurp(path)); }

std::string trace_to_json(const PlanTrace& trace) {
  ordered_json j;
  j["format"] = "pushsort-trace-v1";
  j["units"] = "m";
  j["complete"] = trace.complete;
  j["actions"] = static_cast<int>(trace.steps.size());
  j["total_transit"] = trace.total_transit;
  j["final_j"] = trace.final_j;
  ordered_json steps = ordered_json::array();
  for (const TraceStep& s : trace.steps) {
    ordered_json e;
    e["action"] = action_json(s.action);
    e["j_before"] = s.j_before;
    e["j_after"] = s.j_after;
    e["transit"] = s.transit;
    e["j_increased"] = s.j_increased;
    steps.push_back(std::move(e));
  }
  j["steps"] = std::move(steps);
  j["final_scene"] = scene_json(trace.final_state);
  return j.dump(2) + "\n";
}

void save_trace(const PlanTrace& trace, const std::string& path) {
  spit(trace_to_json(trace), path);
}

void save_timing(const PlanTrace& trace, const std::string& path) {
  ordered_json j;
  j["format"] = "pushsort-timing-v1";
  double total = 0.0;
  ordered_json per = ordered_json::array();
  for (const TraceStep& s : trace.steps) {
    per.push_back(s.wall_seconds);
    total += s.wall_seconds;
  }
  j["total_wall_seconds"] = total;
  j["wall_seconds"] = std::move(per);
  spit(j.dump(2) + "\n", path);
}

std::vector<Action> load_trace_actions(const std::string& path) {
  try {
    const ordered_json j = parse_checked(slurp(path), "pushsort-trace-v1");
    std::vector<Action> actions;
    for (const auto& s : j.at("steps")) actions.push_back(action_from(s.at("action")));
    return actions;
  } catch (const ordered_json::exception& e) {
    throw IoError(std::string("malformed trace file: ") + e.what());
  }
}

}  // namespace pushsort
