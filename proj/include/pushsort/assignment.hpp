#pragma once

#include <utility>
#include <vector>

#include "pushsort/scene.hpp"

namespace pushsort {

// Optimal object-to-region allocation. region_of[i] is the region index
// assigned to object i (-1 for an object excluded from the instance);
// total_cost is the summed center-to-region distance.
struct Assignment {
  std::vector<int> region_of;
  double total_cost = 0.0;
};

// Exact single-commodity transportation solve: item i to column j costs
// costs[i][j] >= 0, column j absorbs at most caps[j] items, every item must
// land somewhere. Successive shortest augmenting paths; deterministic
// (items inserted in index order, path ties broken toward smaller column
// indices). Throws InfeasibleTaskError when total capacity is short.
std::pair<std::vector<int>, double> solve_transportation(
    const std::vector<std::vector<double>>& costs, const std::vector<int>& caps);

// Optimal assignment cost of the scene under per-category region capacities.
// Categories decompose into independent transportation problems.
Assignment compute_cost(const SceneState& state);

// Optimal assignment of the scene without object `removed` (capacities
// unchanged). region_of[removed] == -1 in the result.
Assignment remove_and_resolve(const SceneState& state, int removed);

// Warm structure for scoring grasp candidates: per-category solved
// transportation plus cheap sensitivity queries.
class AssignmentEngine {
 public:
  explicit AssignmentEngine(const SceneState& state);

  const Assignment& base() const { return base_; }

  struct Residual {
    // Optimal cost over all objects except i (capacities unchanged).
    double without = 0.0;
    // without + the cheapest reshuffle needed when region j additionally
    // loses one capacity slot of object i's category. Infinite entries mark
    // regions with no capacity for that category.
    std::vector<double> with_slot_at;
  };
  Residual residual(int i) const;

 private:
  struct Category {
    std::vector<int> items;  // object ids, ascending
    std::vector<std::vector<double>> costs;
    std::vector<int> caps;
    double solved_cost = 0.0;
  };

  std::vector<Category> cats_;
  Assignment base_;
};

}  // namespace pushsort
