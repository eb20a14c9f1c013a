#include "pushsort/assignment.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "pushsort/errors.hpp"
#include "pushsort/geometry.hpp"

namespace pushsort {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Successive shortest augmenting paths over the bipartite item/column graph,
// with Jonker-Volgenant duals (u per item, v per column). Invariants after
// each insertion: costs[i][j] - u[i] - v[j] >= 0 for all inserted i, with
// equality on assigned pairs, and v == 0 on columns with spare capacity.
// Those make the reduced-cost Dijkstra below exact.
class TransportSolver {
 public:
  TransportSolver(const std::vector<std::vector<double>>* costs,
                  const std::vector<int>* caps)
      : costs_(costs),
        caps_(caps),
        m_(static_cast<int>(caps->size())),
        fill_(m_, 0),
        v_(m_, 0.0),
        col_items_(m_),
        dist_(m_),
        settled_(m_),
        pred_item_(m_),
        pred_col_(m_) {
    int n = static_cast<int>(costs->size());
    col_of_.assign(n, -1);
    u_.assign(n, 0.0);
  }

  void insert_all_except(int skip) {
    for (int i = 0; i < static_cast<int>(costs_->size()); ++i) {
      if (i != skip) insert(i);
    }
  }

  double total() const { return total_; }
  int column_of(int item) const { return col_of_[item]; }

  // Extra cost incurred if column j loses one capacity slot. Zero when j has
  // spare room; otherwise the cheapest chain of reassignments that frees one
  // unit of j. Does not mutate the solve. Infinite if nothing can move.
  double eviction_delta(int j) const {
    if (fill_[j] < (*caps_)[j]) return 0.0;
    if (fill_[j] == 0) return kInf;  // cap already zero, nothing to evict
    std::fill(dist_.begin(), dist_.end(), kInf);
    std::fill(settled_.begin(), settled_.end(), false);
    dist_[j] = 0.0;
    while (true) {
      int jc = pick_min_unsettled();
      if (jc < 0) return kInf;
      settled_[jc] = true;
      bool spare = jc != j && fill_[jc] < (*caps_)[jc];
      // Reduced path cost back to true cost: potentials telescope along the
      // reassignment chain.
      if (spare) return dist_[jc] + v_[jc] - v_[j];
      relax_from(jc);
    }
  }

 private:
  void insert(int item) {
    const std::vector<double>& c = (*costs_)[item];
    std::fill(settled_.begin(), settled_.end(), false);
    for (int j = 0; j < m_; ++j) {
      dist_[j] = c[j] - v_[j];
      pred_item_[j] = item;
      pred_col_[j] = -1;
    }
    int target = -1;
    while (true) {
      int jc = pick_min_unsettled();
      if (jc < 0) throw InfeasibleTaskError("region capacities short of object count");
      settled_[jc] = true;
      if (fill_[jc] < (*caps_)[jc]) {
        target = jc;
        break;
      }
      relax_from(jc);
    }
    double d_star = dist_[target];
    for (int j = 0; j < m_; ++j) {
      if (settled_[j]) {
        for (int it : col_items_[j]) u_[it] += d_star - dist_[j];
        v_[j] += dist_[j] - d_star;
      }
    }
    u_[item] += d_star;
    // Flip assignments along the augmenting path back to the new item.
    int j = target;
    ++fill_[target];
    while (true) {
      int who = pred_item_[j];
      int prev = pred_col_[j];
      if (col_of_[who] >= 0) total_ -= (*costs_)[who][col_of_[who]];
      total_ += (*costs_)[who][j];
      col_of_[who] = j;
      col_items_[j].push_back(who);
      if (prev < 0) break;
      auto& pool = col_items_[prev];
      pool.erase(std::find(pool.begin(), pool.end(), who));
      j = prev;
    }
  }

  int pick_min_unsettled() const {
    int best = -1;
    for (int j = 0; j < m_; ++j) {
      if (!settled_[j] && dist_[j] < kInf &&
          (best < 0 || dist_[j] < dist_[best])) {
        best = j;
      }
    }
    return best;
  }

  void relax_from(int jc) const {
    for (int it : col_items_[jc]) {
      const std::vector<double>& cu = (*costs_)[it];
      for (int j = 0; j < m_; ++j) {
        if (settled_[j]) continue;
        double nd = dist_[jc] + cu[j] - u_[it] - v_[j];
        if (nd < dist_[j]) {
          dist_[j] = nd;
          pred_item_[j] = it;
          pred_col_[j] = jc;
        }
      }
    }
  }

  const std::vector<std::vector<double>>* costs_;
  const std::vector<int>* caps_;
  int m_;
  std::vector<int> fill_, col_of_;
  std::vector<double> u_, v_;
  std::vector<std::vector<int>> col_items_;
  double total_ = 0.0;
  // Dijkstra scratch, reused across insertions.
  mutable std::vector<double> dist_;
  mutable std::vector<char> settled_;
  mutable std::vector<int> pred_item_, pred_col_;
};

}  // namespace

std::pair<std::vector<int>, double> solve_transportation(
    const std::vector<std::vector<double>>& costs, const std::vector<int>& caps) {
  for (const auto& row : costs) {
    if (row.size() != caps.size()) {
      throw StructuralError("cost matrix width does not match capacity count");
    }
  }
  TransportSolver solver(&costs, &caps);
  solver.insert_all_except(-1);
  std::vector<int> cols(costs.size());
  for (int i = 0; i < static_cast<int>(costs.size()); ++i) cols[i] = solver.column_of(i);
  return {std::move(cols), solver.total()};
}

namespace {

struct CategorySplit {
  std::vector<int> items;
  std::vector<std::vector<double>> costs;
  std::vector<int> caps;
};

std::vector<CategorySplit> split_by_category(const SceneState& state) {
  std::vector<CategorySplit> cats(state.num_categories);
  for (int k = 0; k < state.num_categories; ++k) {
    cats[k].caps.resize(state.num_regions());
    for (int j = 0; j < state.num_regions(); ++j) {
      cats[k].caps[j] = state.regions[j].capacities[k];
    }
  }
  for (int i = 0; i < state.num_objects(); ++i) {
    const ObjectState& obj = state.objects[i];
    CategorySplit& cat = cats[obj.label];
    cat.items.push_back(i);
    std::vector<double> row(state.num_regions());
    for (int j = 0; j < state.num_regions(); ++j) {
      row[j] = dist_point_polygon(obj.center, state.regions[j].polygon);
    }
    cat.costs.push_back(std::move(row));
  }
  return cats;
}

}  // namespace

Assignment compute_cost(const SceneState& state) {
  Assignment out;
  out.region_of.assign(state.num_objects(), -1);
  for (const CategorySplit& cat : split_by_category(state)) {
    if (cat.items.empty()) continue;
    TransportSolver solver(&cat.costs, &cat.caps);
    solver.insert_all_except(-1);
    out.total_cost += solver.total();
    for (int r = 0; r < static_cast<int>(cat.items.size()); ++r) {
      out.region_of[cat.items[r]] = solver.column_of(r);
    }
  }
  return out;
}

Assignment remove_and_resolve(const SceneState& state, int removed) {
  Assignment out;
  out.region_of.assign(state.num_objects(), -1);
  for (const CategorySplit& cat : split_by_category(state)) {
    if (cat.items.empty()) continue;
    int skip = -1;
    for (int r = 0; r < static_cast<int>(cat.items.size()); ++r) {
      if (cat.items[r] == removed) skip = r;
    }
    TransportSolver solver(&cat.costs, &cat.caps);
    solver.insert_all_except(skip);
    out.total_cost += solver.total();
    for (int r = 0; r < static_cast<int>(cat.items.size()); ++r) {
      if (r != skip) out.region_of[cat.items[r]] = solver.column_of(r);
    }
  }
  return out;
}

AssignmentEngine::AssignmentEngine(const SceneState& state) {
  base_.region_of.assign(state.num_objects(), -1);
  for (CategorySplit& cat : split_by_category(state)) {
    Category stored;
    stored.items = std::move(cat.items);
    stored.costs = std::move(cat.costs);
    stored.caps = std::move(cat.caps);
    if (!stored.items.empty()) {
      TransportSolver solver(&stored.costs, &stored.caps);
      solver.insert_all_except(-1);
      stored.solved_cost = solver.total();
      base_.total_cost += stored.solved_cost;
      for (int r = 0; r < static_cast<int>(stored.items.size()); ++r) {
        base_.region_of[stored.items[r]] = solver.column_of(r);
      }
    }
    cats_.push_back(std::move(stored));
  }
}

AssignmentEngine::Residual AssignmentEngine::residual(int i) const {
  const Category* home = nullptr;
  int local = -1;
  double others = 0.0;
  for (const Category& cat : cats_) {
    auto it = std::find(cat.items.begin(), cat.items.end(), i);
    if (it != cat.items.end()) {
      home = &cat;
      local = static_cast<int>(it - cat.items.begin());
    } else {
      others += cat.solved_cost;
    }
  }
  if (home == nullptr) throw StructuralError("residual query for unknown object");

  Residual out;
  TransportSolver solver(&home->costs, &home->caps);
  solver.insert_all_except(local);
  out.without = others + solver.total();
  out.with_slot_at.resize(home->caps.size());
  for (int j = 0; j < static_cast<int>(home->caps.size()); ++j) {
    double delta = solver.eviction_delta(j);
    out.with_slot_at[j] = delta == kInf ? kInf : out.without + delta;
  }
  return out;
}

}  // namespace pushsort
