#include "pushsort/grasp_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pushsort/assignment.hpp"
#include "pushsort/errors.hpp"

namespace pushsort {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Improvements below this are dual-recomputation noise, not real gains; a
// grasp must beat the current cost by at least this much to be proposed.
constexpr double kMinGain = 1e-9;

// Per-sample object occupancy: how many object discs cover the sample and,
// when exactly one does, which. A sample is usable for grasping object i if
// its only blocker (if any) is i itself, since i is lifted first.
struct Occupancy {
  std::vector<int> count;
  std::vector<int> solo;

  Occupancy(const SceneState& state, const PlacementGrid& grid) {
    const auto& samples = grid.samples();
    count.assign(samples.size(), 0);
    solo.assign(samples.size(), -1);
    const double block = 2.0 * grid.object_radius();
    for (size_t s = 0; s < samples.size(); ++s) {
      for (int i = 0; i < state.num_objects(); ++i) {
        if (dist(samples[s].point, state.objects[i].center) <= block) {
          ++count[s];
          solo[s] = i;
        }
      }
    }
  }

  bool usable(size_t s, int lifted) const {
    return count[s] == 0 || (count[s] == 1 && solo[s] == lifted);
  }
};

double summed_region_dist(const PlacementSample& s) {
  double total = 0.0;
  for (double d : s.region_dist) total += d;
  return total;
}

}  // namespace

PlacementGrid::PlacementGrid(const SceneState& state, const ReachabilityMap& map)
    : map_(&map) {
  radius_ = state.max_radius();
  if (radius_ <= 0.0) {
    throw StructuralError("placement grid needs at least one object to size its spacing");
  }
  spacing_ = std::sqrt(2.0) * radius_;
  auto [lo, hi] = map.bounds();
  int mmax = static_cast<int>(std::floor((hi.x - lo.x) / spacing_ + 1e-9));
  int nmax = static_cast<int>(std::floor((hi.y - lo.y) / spacing_ + 1e-9));
  if (static_cast<long long>(mmax + 1) * (nmax + 1) > 2'000'000) {
    throw StructuralError("placement grid too fine for the workspace extent");
  }

  const int T = state.num_regions();
  region_counts_.assign(T, 0);
  // A buffer candidate must sit closer to every region than that region's
  // nearest sibling region does.
  std::vector<double> nearest_other(T, kInf);
  for (int j = 0; j < T; ++j) {
    for (int k = 0; k < T; ++k) {
      if (k != j) {
        nearest_other[j] = std::min(
            nearest_other[j],
            dist_polygon_polygon(state.regions[k].polygon, state.regions[j].polygon));
      }
    }
  }

  for (int m = 0; m <= mmax; ++m) {
    for (int n = 0; n <= nmax; ++n) {
      Vec2 p = lo + Vec2{m * spacing_, n * spacing_};
      if (!map.reach(p)) continue;
      PlacementSample s;
      s.m = m;
      s.n = n;
      s.point = p;
      s.region_dist.resize(T);
      bool outside_all = true;
      for (int j = 0; j < T; ++j) {
        s.region_dist[j] = dist_point_polygon(p, state.regions[j].polygon);
        if (s.region_dist[j] == 0.0) outside_all = false;
        if (s.region < 0 && ball_in_polygon(p, 2.0 * radius_, state.regions[j].polygon)) {
          s.region = j;
        }
      }
      if (s.region >= 0) {
        ++region_counts_[s.region];
      } else if (outside_all) {
        s.buffer_ok = true;
        for (int j = 0; j < T; ++j) {
          if (!(s.region_dist[j] < nearest_other[j])) s.buffer_ok = false;
        }
      } else {
        continue;  // inside a region but without the 2R margin: unusable
      }
      samples_.push_back(std::move(s));
    }
  }
}

std::optional<BufferChoice> find_buffer(const SceneState& state, const PlacementGrid& grid) {
  Occupancy occ(state, grid);
  const auto& samples = grid.samples();
  int best_true = -1, best_any = -1;
  double score_true = kInf, score_any = kInf;
  for (size_t s = 0; s < samples.size(); ++s) {
    if (samples[s].region >= 0 || !occ.usable(s, -1)) continue;
    double score = summed_region_dist(samples[s]);
    if (score < score_any) {
      score_any = score;
      best_any = static_cast<int>(s);
    }
    if (samples[s].buffer_ok && score < score_true) {
      score_true = score;
      best_true = static_cast<int>(s);
    }
  }
  if (best_true >= 0) return BufferChoice{samples[best_true].point, best_true, false};
  if (best_any >= 0) return BufferChoice{samples[best_any].point, best_any, true};
  return std::nullopt;
}

std::vector<std::optional<GraspAction>> plan_grasp_batch(const SceneState& state,
                                                         const PlacementGrid& grid,
                                                         const std::vector<PlanMode>& modes) {
  std::vector<std::optional<GraspAction>> best(modes.size());
  if (modes.empty() || state.num_objects() == 0) return best;
  AssignmentEngine engine(state);
  const double J = engine.base().total_cost;
  Occupancy occ(state, grid);
  const auto& samples = grid.samples();
  std::vector<double> best_key(modes.size(), kInf);

  for (int i = 0; i < state.num_objects(); ++i) {
    if (!grid.map().reach(state.objects[i].center)) continue;
    AssignmentEngine::Residual res = engine.residual(i);

    // Post-grasp assignment cost with object i standing at the sample,
    // minimized over the region the moved object gets assigned to.
    auto exact_post = [&](const PlacementSample& s) {
      double v = kInf;
      for (size_t j = 0; j < res.with_slot_at.size(); ++j) {
        v = std::min(v, s.region_dist[j] + res.with_slot_at[j]);
      }
      return v;
    };

    int buffer_true = -1, buffer_any = -1;
    double bscore_true = kInf, bscore_any = kInf;
    for (size_t s = 0; s < samples.size(); ++s) {
      if (!occ.usable(s, i)) continue;
      const PlacementSample& smp = samples[s];
      // Re-placing the object where it already stands is not an action. The
      // pseudo buffer scores by fiat, so without this it can pick that spot.
      if (dist(smp.point, state.objects[static_cast<size_t>(i)].center) <= kGeomTol) continue;
      if (smp.region < 0) {
        // Buffer candidates are not scored inline; remember the best one.
        double score = summed_region_dist(smp);
        if (score < bscore_any) {
          bscore_any = score;
          buffer_any = static_cast<int>(s);
        }
        if (smp.buffer_ok && score < bscore_true) {
          bscore_true = score;
          buffer_true = static_cast<int>(s);
        }
        continue;
      }
      const double exact = exact_post(smp);
      if (!(exact < J - kMinGain)) continue;
      for (size_t m = 0; m < modes.size(); ++m) {
        if (!modes[m].is_global() && smp.region != modes[m].region) continue;
        const double key = modes[m].is_global() ? exact : res.with_slot_at[modes[m].region];
        if (key < best_key[m]) {
          best_key[m] = key;
          best[m] = GraspAction{i, smp.point, smp.region, false, false, exact};
        }
      }
    }

    // Buffer placement: real distances for a true buffer, zeros by fiat for
    // the pseudo fallback.
    if (buffer_true >= 0) {
      const PlacementSample& smp = samples[buffer_true];
      const double exact = exact_post(smp);
      if (exact < J - kMinGain) {
        int account = 0;
        double acc_best = kInf;
        for (size_t j = 0; j < res.with_slot_at.size(); ++j) {
          double v = smp.region_dist[j] + res.with_slot_at[j];
          if (v < acc_best) {
            acc_best = v;
            account = static_cast<int>(j);
          }
        }
        for (size_t m = 0; m < modes.size(); ++m) {
          const double key = modes[m].is_global()
                                 ? exact
                                 : smp.region_dist[modes[m].region] +
                                       res.with_slot_at[modes[m].region];
          if (key < best_key[m]) {
            best_key[m] = key;
            best[m] = GraspAction{i, smp.point, account, true, false, exact};
          }
        }
      }
    } else if (buffer_any >= 0) {
      const PlacementSample& smp = samples[buffer_any];
      double pretend = kInf;
      int account = 0;
      for (size_t j = 0; j < res.with_slot_at.size(); ++j) {
        if (res.with_slot_at[j] < pretend) {
          pretend = res.with_slot_at[j];
          account = static_cast<int>(j);
        }
      }
      if (pretend < J - kMinGain) {
        for (size_t m = 0; m < modes.size(); ++m) {
          const double key = modes[m].is_global() ? pretend : res.with_slot_at[modes[m].region];
          if (key < best_key[m]) {
            best_key[m] = key;
            best[m] = GraspAction{i, smp.point, account, true, true, pretend};
          }
        }
      }
    }
  }
  return best;
}

std::optional<GraspAction> plan_grasp(const SceneState& state, const PlacementGrid& grid,
                                      PlanMode mode) {
  return plan_grasp_batch(state, grid, {mode})[0];
}

}  // namespace pushsort
