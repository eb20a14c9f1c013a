#include "doctest.h"

#include <cstdio>
#include <string>

#include "oracles.hpp"
#include "pushsort/assignment.hpp"
#include "pushsort/errors.hpp"
#include "pushsort/grasp_planner.hpp"
#include "pushsort/scenario.hpp"

using namespace pushsort;

TEST_CASE("generation is deterministic per seed") {
  ScenarioSpec spec;
  spec.seed = 11;
  spec.objects = 12;
  spec.regions = 2;
  const std::string a = scenario_to_json(generate_scenario(spec));
  const std::string b = scenario_to_json(generate_scenario(spec));
  CHECK(a == b);
  spec.seed = 12;
  CHECK(scenario_to_json(generate_scenario(spec)) != a);
}

TEST_CASE("spec validation rejects out-of-range requests") {
  ScenarioSpec spec;
  spec.objects = 0;
  CHECK_THROWS_AS(generate_scenario(spec), StructuralError);
  spec = {};
  spec.objects = 3;
  spec.categories = 4;
  CHECK_THROWS_AS(generate_scenario(spec), StructuralError);
  spec = {};
  spec.blob_fraction = 0.8;
  CHECK_THROWS_AS(generate_scenario(spec), StructuralError);
  spec = {};
  spec.objects = 4;
  spec.regions = 2;
  spec.caps = {{4}};  // one row for two regions
  CHECK_THROWS_AS(generate_scenario(spec), StructuralError);
}

TEST_CASE("derived labels follow the category convention") {
  ScenarioSpec spec;
  spec.objects = 10;
  spec.regions = 2;

  spec.categories = 2;  // 80/20 split
  Scenario sc = generate_scenario(spec);
  int zeros = 0;
  for (const ObjectState& o : sc.state.objects) zeros += o.label == 0 ? 1 : 0;
  CHECK(zeros == 8);

  spec.categories = 10;  // one goal per object
  sc = generate_scenario(spec);
  for (int i = 0; i < 10; ++i) CHECK(sc.state.objects[i].label == i);
  for (int k = 0; k < 10; ++k) {
    for (int j = 0; j < 2; ++j)
      CHECK(sc.spec.caps[j][k] == (k % 2 == j ? 1 : 0));
  }

  spec.categories = 3;  // round robin
  sc = generate_scenario(spec);
  for (int i = 0; i < 10; ++i) CHECK(sc.state.objects[i].label == i % 3);
  // derived capacities absorb every category with an even split
  for (int k = 0; k < 3; ++k) {
    int count = 0, cap = 0;
    for (const ObjectState& o : sc.state.objects) count += o.label == k ? 1 : 0;
    for (int j = 0; j < 2; ++j) cap += sc.spec.caps[j][k];
    CHECK(cap >= count);
  }
}

TEST_CASE("generated scenes are collision-free and inside the workspace") {
  ScenarioSpec spec;
  spec.seed = 5;
  spec.objects = 30;
  spec.regions = 3;
  const Scenario sc = generate_scenario(spec);
  REQUIRE(sc.state.num_objects() == 30);
  REQUIRE(sc.state.num_regions() == 3);
  for (int i = 0; i < 30; ++i) {
    const auto [lo, hi] = sc.state.objects[i].shape.bounding_box();
    CHECK(lo.x >= 0.0);
    CHECK(lo.y >= 0.0);
    CHECK(hi.x <= spec.workspace);
    CHECK(hi.y <= spec.workspace);
    for (int j = i + 1; j < 30; ++j)
      CHECK(!oracle::sat_overlap(sc.state.objects[i].shape, sc.state.objects[j].shape));
  }
}

TEST_CASE("maps are built from their spec strings") {
  ScenarioSpec spec;
  spec.workspace = 2.0;
  auto full = make_map(spec);
  CHECK(full->reach({1.0, 1.0}));
  CHECK(full->reach({0.0, 0.0}));
  CHECK(full->reach({2.0, 2.0}));
  CHECK(!full->reach({2.1, 1.0}));

  spec.map = "rect:0.5,0.5,1.5,1.0";
  auto rect = make_map(spec);
  CHECK(rect->reach({1.0, 0.75}));
  CHECK(!rect->reach({1.0, 1.2}));

  spec.map = "rect:0.5,0.5,0.5,1.0";
  CHECK_THROWS_AS(make_map(spec), IoError);
  spec.map = "disc:1,1,0.5";
  CHECK_THROWS_AS(make_map(spec), IoError);
}

TEST_CASE("scenario json round-trips byte for byte") {
  ScenarioSpec spec;
  spec.seed = 21;
  spec.objects = 8;
  spec.regions = 2;
  spec.categories = 2;
  const Scenario sc = generate_scenario(spec);
  const std::string text = scenario_to_json(sc);
  const Scenario back = scenario_from_json(text);
  CHECK(scenario_to_json(back) == text);
  CHECK(back.state.num_objects() == sc.state.num_objects());
  CHECK(back.spec.seed == sc.spec.seed);

  CHECK_THROWS_AS(scenario_from_json("{\"format\":\"something-else\"}"), IoError);
  CHECK_THROWS_AS(scenario_from_json("{ not json"), IoError);

  const std::string path = "tmp_scenario_roundtrip.json";
  save_scenario(sc, path);
  const Scenario loaded = load_scenario(path);
  CHECK(scenario_to_json(loaded) == text);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_scenario("no_such_dir/nope.json"), IoError);
}

TEST_CASE("traces persist actions but not wall-clock readings") {
  const Scenario sc = generate_sparse_scenario(2, 6, 2);
  const auto map = make_map(sc.spec);
  HighLevelConfig config;
  config.mode = ExpandMode::GreedyPerRegion;
  config.use_push = false;
  const PlanTrace trace = solve_task(sc.state, config, *map, 40);
  REQUIRE(trace.complete);
  REQUIRE(!trace.steps.empty());

  const std::string text = trace_to_json(trace);
  CHECK(text.find("wall") == std::string::npos);
  CHECK(text.find("pushsort-trace-v1") != std::string::npos);

  const std::string path = "tmp_trace_roundtrip.json";
  save_trace(trace, path);
  const std::vector<Action> actions = load_trace_actions(path);
  REQUIRE(actions.size() == trace.steps.size());
  for (size_t k = 0; k < actions.size(); ++k)
    CHECK(actions[k].kind == trace.steps[k].action.kind);
  std::remove(path.c_str());

  const std::string tpath = "tmp_trace_timing.json";
  save_timing(trace, tpath);
  const std::string timing = oracle::slurp(tpath);
  CHECK(timing.find("pushsort-timing-v1") != std::string::npos);
  CHECK(timing.find("wall") != std::string::npos);
  std::remove(tpath.c_str());
}

TEST_CASE("sparse instances satisfy the grasp completeness preconditions") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const int regions = 1 + static_cast<int>(seed) % 4;
    const Scenario sc = generate_sparse_scenario(seed, 20, regions);
    CHECK(sc.state.num_objects() <= 5 * regions);
    const auto map = make_map(sc.spec);
    for (const ObjectState& o : sc.state.objects) CHECK(map->reach(o.center));
    const PlacementGrid grid(sc.state, *map);
    for (int j = 0; j < sc.state.num_regions(); ++j) {
      int cap = 0;
      for (int c : sc.state.regions[j].capacities) cap += c;
      CHECK(grid.samples_in(j) > 9 * cap);
    }
    const auto buffer = find_buffer(sc.state, grid);
    REQUIRE(buffer.has_value());
    CHECK(!buffer->pseudo);
  }
}

TEST_CASE("the cyclic instance pins one sample per region") {
  const Scenario sc = make_cyclic_scenario();
  REQUIRE(sc.state.num_regions() == 4);
  REQUIRE(sc.state.num_objects() == 4);
  CHECK(sc.state.num_categories == 4);
  const auto map = make_map(sc.spec);
  const PlacementGrid grid(sc.state, *map);
  for (int j = 0; j < 4; ++j) CHECK(grid.samples_in(j) == 1);
  for (int k = 0; k < 4; ++k) {
    CHECK(sc.state.objects[k].label == k);
    CHECK(sc.state.regions[(k + 1) % 4].capacities[k] == 1);
  }
  CHECK(compute_cost(sc.state).total_cost > 0.0);
}
