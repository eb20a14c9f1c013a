#include "pushsort/push_planner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <utility>

#include "pushsort/errors.hpp"

namespace pushsort {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// A push must beat the current cost by at least this much to be proposed;
// smaller reductions are numerical noise at workspace scale.
constexpr double kMinGain = 1e-9;

struct SupportTable {
  std::vector<double> smin, smax;  // along the push direction
  std::vector<double> tmin, tmax;  // across it
};

SupportTable support_table(const SceneState& state, const Direction& u, const Direction& up) {
  SupportTable t;
  const int n = state.num_objects();
  t.smin.resize(n);
  t.smax.resize(n);
  t.tmin.resize(n);
  t.tmax.resize(n);
  for (int i = 0; i < n; ++i) {
    auto s = supports(state.objects[i].shape, u);
    auto p = supports(state.objects[i].shape, up);
    t.smin[i] = s.first;
    t.smax[i] = s.second;
    t.tmin[i] = p.first;
    t.tmax[i] = p.second;
  }
  return t;
}

// First object hit by the backward ray from one vertex; ties keep the
// smallest object id.
std::optional<std::pair<int, double>> first_hit(const SceneState& state, int self, Vec2 origin,
                                                const Direction& back) {
  int best = -1;
  double bt = kInf;
  for (int j = 0; j < state.num_objects(); ++j) {
    if (j == self) continue;
    auto t = raycast(origin, back, state.objects[j].shape);
    if (t && *t < bt) {
      bt = *t;
      best = j;
    }
  }
  if (best < 0) return std::nullopt;
  return std::make_pair(best, bt);
}

// Memoized transmission recursion over the affected set. Start distances
// come from the direct pusher gap or from chains through blocking affected
// objects; rays whose first hit is unaffected contribute nothing. Contacts at
// zero gap transmit only from strictly smaller front supports, which rules
// out side-by-side touch cycles.
class CompressionSolver {
 public:
  using HitFn = std::function<std::optional<std::pair<int, double>>(int, int)>;

  CompressionSolver(const SceneState& state, const std::vector<int>& affected, double alpha,
                    const std::vector<double>& smin, HitFn hits)
      : state_(state),
        affected_(affected),
        alpha_(alpha),
        smin_(smin),
        hits_(std::move(hits)),
        mark_(state.objects.size(), 0),
        memo_(state.objects.size(), 0.0) {}

  double dbar(int i) {
    if (mark_[i] == 2) return memo_[i];
    if (mark_[i] == 1) throw StructuralError("cyclic blocking chain in push model");
    mark_[i] = 1;
    double d = smin_[i] - alpha_;
    const int nv = state_.objects[i].shape.size();
    for (int k = 0; k < nv; ++k) {
      auto hit = hits_(i, k);
      if (!hit) continue;
      auto [j, gap] = *hit;
      if (!std::binary_search(affected_.begin(), affected_.end(), j)) continue;
      if (gap <= kGeomTol && smin_[j] >= smin_[i] - kGeomTol) continue;
      d = std::min(d, gap + dbar(j));
    }
    mark_[i] = 2;
    memo_[i] = d;
    return d;
  }

 private:
  const SceneState& state_;
  const std::vector<int>& affected_;
  double alpha_;
  const std::vector<double>& smin_;
  HitFn hits_;
  std::vector<char> mark_;
  std::vector<double> memo_;
};

bool bbox_overlap(const std::pair<Vec2, Vec2>& a, const std::pair<Vec2, Vec2>& b) {
  return a.first.x <= b.second.x && b.first.x <= a.second.x && a.first.y <= b.second.y &&
         b.first.y <= a.second.y;
}

PiecewiseCost::Term make_term(const SceneState& state, int object, int region, double dbar,
                              const Direction& u, double horizon) {
  PiecewiseCost::Term term;
  term.object = object;
  term.region = region;
  term.dbar = dbar;
  term.start = state.objects[object].center;
  term.dir = u.vec();
  const ConvexPolygon& poly = state.regions[region].polygon;

  const double d0 = dist_point_polygon(term.start, poly);
  const double vend = std::min(dbar, horizon);
  if (vend > 0.0 || dbar >= horizon) {
    term.pieces.push_back({0.0, std::max(vend, 0.0), 0.0, 0.0, d0 * d0});
  }
  if (dbar < horizon) {
    const double len = horizon - dbar;
    for (const FeatureSegment& seg : feature_segments(term.start, u, len, poly)) {
      QuadPiece qp{dbar + seg.lo, dbar + seg.hi, 0.0, 0.0, 0.0};
      switch (seg.feature.kind) {
        case Feature::Kind::Interior:
          break;
        case Feature::Kind::Vertex: {
          const Vec2 w = term.start - poly.vertex(seg.feature.index);
          const double wu = w.dot(u.vec());
          qp.a = 1.0;
          qp.b = 2.0 * (wu - dbar);
          qp.c = dbar * dbar - 2.0 * dbar * wu + w.norm_sq();
          break;
        }
        case Feature::Kind::Edge: {
          const Vec2 ea = poly.vertex(seg.feature.index);
          const Vec2 eb = poly.vertex((seg.feature.index + 1) % poly.size());
          const Vec2 e = eb - ea;
          const Vec2 n = Vec2{e.y, -e.x} * (1.0 / e.norm());
          const double q0 = n.dot(term.start - ea);
          const double p = n.dot(u.vec());
          const double base = q0 - dbar * p;
          qp.a = p * p;
          qp.b = 2.0 * p * base;
          qp.c = base * base;
          break;
        }
      }
      term.pieces.push_back(qp);
    }
  }
  if (term.pieces.empty()) term.pieces.push_back({0.0, horizon, 0.0, 0.0, d0 * d0});
  return term;
}

double piece_value(const QuadPiece& p, double d) { return std::sqrt(std::max(0.0, p.eval(d))); }

// Exact minimization of several term subsets of one cost over [lo, hi],
// optionally constrained so the full-term sum never exceeds *full_share. Per
// merged piece the candidates are the endpoints, the surrogate vertex, a
// bisection on the exact derivative when it brackets a sign change, and the
// feasibility boundary when the constraint flips. All candidates are compared
// by exact Euclidean sums; ties prefer smaller travel.
std::vector<std::optional<std::pair<double, double>>> minimize_shared(
    const PiecewiseCost& cost, const std::vector<std::vector<int>>& queries, double lo, double hi,
    const double* full_share) {
  std::vector<std::optional<std::pair<double, double>>> out(queries.size());
  lo = std::max(lo, 0.0);
  hi = std::min(hi, cost.horizon());
  if (hi < lo) return out;

  const auto& terms = cost.terms();
  std::vector<size_t> ptr(terms.size(), 0);
  auto locate = [&](double mid) {
    for (size_t t = 0; t < terms.size(); ++t) {
      const auto& pieces = terms[t].pieces;
      while (ptr[t] + 1 < pieces.size() && pieces[ptr[t]].hi <= mid) ++ptr[t];
    }
  };
  auto sum_at = [&](const std::vector<int>& ids, double d) {
    double v = 0.0;
    for (int t : ids) v += piece_value(terms[static_cast<size_t>(t)].pieces[ptr[static_cast<size_t>(t)]], d);
    return v;
  };
  auto full_at = [&](double d) {
    double v = 0.0;
    for (size_t t = 0; t < terms.size(); ++t) v += piece_value(terms[t].pieces[ptr[t]], d);
    return v;
  };
  auto deriv_at = [&](const std::vector<int>& ids, double d) {
    double g = 0.0;
    for (int t : ids) {
      const QuadPiece& p = terms[static_cast<size_t>(t)].pieces[ptr[static_cast<size_t>(t)]];
      const double q = std::max(0.0, p.eval(d));
      if (q < 1e-30) continue;
      g += (2.0 * p.a * d + p.b) / (2.0 * std::sqrt(q));
    }
    return g;
  };

  struct Best {
    double value = kInf;
    double d = kInf;
  };
  std::vector<Best> best(queries.size());
  auto consider = [&](size_t qi, double d) {
    if (full_share) {
      if (full_at(d) > *full_share + 1e-12) return;
    }
    const double v = sum_at(queries[qi], d);
    if (v < best[qi].value || (v == best[qi].value && d < best[qi].d)) best[qi] = {v, d};
  };

  std::vector<double> breaks = cost.breakpoints();
  std::vector<double> edges;
  edges.push_back(lo);
  for (double b : breaks)
    if (b > lo && b < hi) edges.push_back(b);
  edges.push_back(hi);

  for (size_t s = 0; s + 1 < edges.size(); ++s) {
    const double a = edges[s], b = edges[s + 1];
    locate((a + b) * 0.5);
    const bool degenerate = b - a < 1e-14;
    for (size_t qi = 0; qi < queries.size(); ++qi) {
      const auto& ids = queries[qi];
      consider(qi, a);
      if (degenerate) continue;
      consider(qi, b);
      double A = 0.0, B = 0.0;
      for (int t : ids) {
        const QuadPiece& p = terms[static_cast<size_t>(t)].pieces[ptr[static_cast<size_t>(t)]];
        A += p.a;
        B += p.b;
      }
      if (A > 1e-18) {
        const double v = -B / (2.0 * A);
        if (v > a && v < b) consider(qi, v);
      }
      if (deriv_at(ids, a) < -1e-15 && deriv_at(ids, b) > 1e-15) {
        double x0 = a, x1 = b;
        for (int it = 0; it < 60; ++it) {
          const double m = 0.5 * (x0 + x1);
          (deriv_at(ids, m) < 0.0 ? x0 : x1) = m;
        }
        consider(qi, 0.5 * (x0 + x1));
      }
    }
    if (full_share && !degenerate) {
      const bool fa = full_at(a) <= *full_share + 1e-12;
      const bool fb = full_at(b) <= *full_share + 1e-12;
      if (fa != fb) {
        double x0 = a, x1 = b;  // x0 tracks the feasible side
        if (!fa) std::swap(x0, x1);
        for (int it = 0; it < 60; ++it) {
          const double m = 0.5 * (x0 + x1);
          (full_at(m) <= *full_share + 1e-12 ? x0 : x1) = m;
        }
        for (size_t qi = 0; qi < queries.size(); ++qi) consider(qi, x0);
      }
    }
  }

  for (size_t qi = 0; qi < queries.size(); ++qi)
    if (best[qi].value < kInf) out[qi] = std::make_pair(best[qi].d, best[qi].value);
  return out;
}

SceneState apply_displacements(const SceneState& state, const PushAction& act) {
  SceneState out = state;
  for (size_t k = 0; k < act.affected.size(); ++k) {
    const double d = act.displacements[k];
    if (d <= 0.0) continue;
    ObjectState& obj = out.objects[static_cast<size_t>(act.affected[k])];
    const Vec2 delta = act.direction * d;
    obj.shape = obj.shape.translated(delta);
    obj.center = obj.center + delta;
  }
  return out;
}

}  // namespace

ConvexPolygon PusherSlot::body_at(double alpha_pos, const Pusher& pusher) const {
  const Vec2 u = dir;
  const Vec2 p = perp;
  const double lo = beta - pusher.width * 0.5;
  const double hi = beta + pusher.width * 0.5;
  return ConvexPolygon({u * (alpha_pos - pusher.thickness) + p * lo, u * alpha_pos + p * lo,
                        u * alpha_pos + p * hi, u * (alpha_pos - pusher.thickness) + p * hi});
}

std::vector<PusherSlot> enumerate_slots(const SceneState& state, const Pusher& pusher,
                                        const Direction& dir, int direction_index) {
  if (pusher.width <= 0.0 || pusher.thickness <= 0.0)
    throw StructuralError("pusher dimensions must be positive");
  const int n = state.num_objects();
  if (n == 0) return {};
  const Direction up = dir.perp();
  const SupportTable sup = support_table(state, dir, up);
  const double half = pusher.width * 0.5;
  const double th = pusher.thickness;

  std::vector<double> bkeys;
  bkeys.reserve(static_cast<size_t>(4 * n));
  for (int i = 0; i < n; ++i) {
    bkeys.push_back(sup.tmin[i] - half);
    bkeys.push_back(sup.tmin[i] + half);
    bkeys.push_back(sup.tmax[i] - half);
    bkeys.push_back(sup.tmax[i] + half);
  }
  std::sort(bkeys.begin(), bkeys.end());
  bkeys.erase(std::unique(bkeys.begin(), bkeys.end()), bkeys.end());

  // Adjacent strip intervals with identical member and boundary sets merge,
  // since every pusher placement across them is equivalent.
  struct BetaCell {
    double lo, hi;
    int index;
    std::vector<int> members, boundary;
  };
  std::vector<BetaCell> cells;
  for (size_t k = 0; k + 1 < bkeys.size(); ++k) {
    const double lo = bkeys[k], hi = bkeys[k + 1];
    const double mid = 0.5 * (lo + hi);
    std::vector<int> members, boundary;
    for (int i = 0; i < n; ++i) {
      const bool inside = sup.tmin[i] >= mid - half && sup.tmax[i] <= mid + half;
      if (inside)
        members.push_back(i);
      else if (sup.tmin[i] < mid + half && sup.tmax[i] > mid - half)
        boundary.push_back(i);
    }
    if (members.empty()) continue;
    if (!cells.empty() && cells.back().hi == lo && cells.back().members == members &&
        cells.back().boundary == boundary) {
      cells.back().hi = hi;
      continue;
    }
    cells.push_back({lo, hi, static_cast<int>(k), std::move(members), std::move(boundary)});
  }

  std::map<std::vector<int>, PusherSlot> dedup;
  for (const BetaCell& cell : cells) {
    const double beta = 0.5 * (cell.lo + cell.hi);
    std::vector<int> order = cell.members;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return sup.smin[a] != sup.smin[b] ? sup.smin[a] < sup.smin[b] : a < b;
    });
    const double min_smin = sup.smin[order.front()];

    std::vector<double> akeys;
    akeys.reserve(order.size() * 2);
    for (int i : order) {
      akeys.push_back(sup.smin[i]);
      akeys.push_back(sup.smax[i] + th);
    }
    std::sort(akeys.begin(), akeys.end());
    akeys.erase(std::unique(akeys.begin(), akeys.end()), akeys.end());

    struct AlphaCell {
      int index;
      double lo, hi;
    };
    std::vector<AlphaCell> acells;
    const double pad = th + 0.01;
    acells.push_back({-1, min_smin - 2.0 * pad, min_smin});  // behind the whole cluster
    for (size_t m = 0; m + 1 < akeys.size(); ++m)
      acells.push_back({static_cast<int>(m), akeys[m], akeys[m + 1]});

    for (const AlphaCell& ac : acells) {
      const double amid = 0.5 * (ac.lo + ac.hi);
      std::vector<int> affected;
      bool blocked = false;
      for (int i : cell.members) {
        if (sup.smin[i] >= amid) {
          affected.push_back(i);
        } else if (sup.smax[i] > amid - th) {
          blocked = true;  // an in-strip object overlaps the pusher body
          break;
        }
      }
      if (blocked || affected.empty()) continue;

      PusherSlot slot;
      slot.direction_index = direction_index;
      slot.dir = dir.vec();
      slot.perp = up.vec();
      slot.alpha_lo = ac.lo;
      slot.alpha_hi = ac.hi;
      slot.alpha = amid;
      slot.beta_lo = cell.lo;
      slot.beta_hi = cell.hi;
      slot.beta = beta;
      slot.alpha_index = ac.index;
      slot.beta_index = cell.index;
      slot.affected = affected;  // already ascending (members are)
      slot.boundary = cell.boundary;

      auto [it, inserted] = dedup.try_emplace(std::move(affected), slot);
      if (!inserted && slot.alpha > it->second.alpha) it->second = slot;
    }
  }

  std::vector<PusherSlot> out;
  out.reserve(dedup.size());
  for (auto& [key, slot] : dedup) out.push_back(std::move(slot));
  std::sort(out.begin(), out.end(), [](const PusherSlot& a, const PusherSlot& b) {
    return a.alpha_index != b.alpha_index ? a.alpha_index < b.alpha_index
                                          : a.beta_index < b.beta_index;
  });
  return out;
}

double compression_distance(const SceneState& state, const PusherSlot& slot, int object) {
  if (!std::binary_search(slot.affected.begin(), slot.affected.end(), object))
    throw QueryError("compression distance queried for an unaffected object");
  const Direction u = Direction::of(slot.dir);
  const Direction back = Direction::of(-slot.dir);
  std::vector<double> smin(state.objects.size(), 0.0);
  for (size_t i = 0; i < state.objects.size(); ++i)
    smin[i] = supports(state.objects[i].shape, u).first;
  CompressionSolver solver(state, slot.affected, slot.alpha, smin, [&](int i, int k) {
    return first_hit(state, i, state.objects[static_cast<size_t>(i)].shape.vertex(k), back);
  });
  return solver.dbar(object);
}

PiecewiseCost::PiecewiseCost(std::vector<Term> terms, double horizon)
    : terms_(std::move(terms)), horizon_(horizon) {
  if (horizon_ < 0.0) throw StructuralError("piecewise cost horizon must be non-negative");
  for (const Term& t : terms_) {
    if (t.pieces.empty()) throw StructuralError("piecewise cost term without pieces");
    if (std::abs(t.pieces.front().lo) > kGeomTol ||
        t.pieces.back().hi < horizon_ - kGeomTol)
      throw StructuralError("piecewise cost term does not cover the horizon");
    for (size_t k = 1; k < t.pieces.size(); ++k)
      if (std::abs(t.pieces[k].lo - t.pieces[k - 1].hi) > kGeomTol)
        throw StructuralError("piecewise cost pieces are not contiguous");
  }
}

double PiecewiseCost::value_at(double d) const {
  double v = 0.0;
  for (const Term& t : terms_) {
    size_t k = 0;
    while (k + 1 < t.pieces.size() && t.pieces[k].hi < d) ++k;
    v += piece_value(t.pieces[k], d);
  }
  return v;
}

double PiecewiseCost::exact_at(double d, const SceneState& state) const {
  double v = 0.0;
  for (const Term& t : terms_) {
    const Vec2 c = t.start + t.dir * std::max(0.0, d - t.dbar);
    v += dist_point_polygon(c, state.regions[static_cast<size_t>(t.region)].polygon);
  }
  return v;
}

double PiecewiseCost::surrogate_at(double d) const {
  double v = 0.0;
  for (const Term& t : terms_) {
    size_t k = 0;
    while (k + 1 < t.pieces.size() && t.pieces[k].hi < d) ++k;
    v += std::max(0.0, t.pieces[k].eval(d));
  }
  return v;
}

std::vector<double> PiecewiseCost::breakpoints() const {
  std::vector<double> out;
  for (const Term& t : terms_)
    for (const QuadPiece& p : t.pieces) {
      if (p.lo > 0.0 && p.lo < horizon_) out.push_back(p.lo);
      if (p.hi > 0.0 && p.hi < horizon_) out.push_back(p.hi);
    }
  out.push_back(0.0);
  out.push_back(horizon_);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PiecewiseCost build_cost(const SceneState& state, const PusherSlot& slot,
                         const Assignment& assignment, PlanMode mode, double horizon) {
  if (horizon < 0.0) throw QueryError("negative travel horizon");
  const Direction u = Direction::of(slot.dir);
  std::vector<PiecewiseCost::Term> terms;
  for (int i : slot.affected) {
    const int region = assignment.region_of[static_cast<size_t>(i)];
    if (region < 0 || region >= state.num_regions())
      throw QueryError("assignment does not cover an affected object");
    if (!mode.is_global() && region != mode.region) continue;
    terms.push_back(make_term(state, i, region, compression_distance(state, slot, i), u, horizon));
  }
  return PiecewiseCost(std::move(terms), horizon);
}

std::optional<std::pair<double, double>> minimize_piecewise(const PiecewiseCost& cost,
                                                            std::pair<double, double> interval) {
  std::vector<int> ids(cost.terms().size());
  for (size_t t = 0; t < ids.size(); ++t) ids[t] = static_cast<int>(t);
  return minimize_shared(cost, {std::move(ids)}, interval.first, interval.second, nullptr)[0];
}

std::vector<std::optional<PushAction>> plan_push_batch(const SceneState& state,
                                                       const PushPlannerConfig& config,
                                                       const ReachabilityMap& map,
                                                       const Assignment& assignment,
                                                       const std::vector<PlanMode>& modes) {
  std::vector<std::optional<PushAction>> out(modes.size());
  const int n = state.num_objects();
  if (n == 0 || modes.empty()) return out;
  if (config.directions < 1) throw StructuralError("push planner needs at least one direction");
  if (assignment.region_of.size() != static_cast<size_t>(n))
    throw QueryError("assignment does not match the scene");

  std::vector<double> share(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const int r = assignment.region_of[static_cast<size_t>(i)];
    if (r < 0 || r >= state.num_regions())
      throw QueryError("assignment does not cover the scene");
    share[static_cast<size_t>(i)] =
        dist_point_polygon(state.objects[static_cast<size_t>(i)].center,
                           state.regions[static_cast<size_t>(r)].polygon);
  }

  struct Best {
    bool found = false;
    double reduction = 0.0;
    PushAction act;
  };
  std::vector<Best> best(modes.size());

  std::vector<std::pair<Vec2, Vec2>> obj_bbox(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    obj_bbox[static_cast<size_t>(i)] = state.objects[static_cast<size_t>(i)].shape.bounding_box();

  for (int di = 0; di < config.directions; ++di) {
    const Direction u =
        Direction::from_angle(2.0 * std::numbers::pi * di / config.directions);
    const Direction up = u.perp();
    const std::vector<PusherSlot> slots = enumerate_slots(state, config.pusher, u, di);
    if (slots.empty()) continue;
    const SupportTable sup = support_table(state, u, up);
    const Direction back = Direction::of(-u.vec());

    std::vector<char> reach_ok(static_cast<size_t>(n), 0);
    std::vector<double> forward(static_cast<size_t>(n), kInf);
    if (config.reachability_guard) {
      for (int i = 0; i < n; ++i) {
        const Vec2 c = state.objects[static_cast<size_t>(i)].center;
        if (!map.reach(c)) continue;
        reach_ok[static_cast<size_t>(i)] = 1;
        forward[static_cast<size_t>(i)] = map.range(c, u).second;
      }
    }

    // Backward first hits are slot-independent; fill them lazily per object.
    std::vector<std::vector<std::optional<std::pair<int, double>>>> hits(
        static_cast<size_t>(n));
    auto hit_at = [&](int i, int k) {
      auto& row = hits[static_cast<size_t>(i)];
      if (row.empty()) {
        const auto& shape = state.objects[static_cast<size_t>(i)].shape;
        row.resize(static_cast<size_t>(shape.size()));
        for (int v = 0; v < shape.size(); ++v)
          row[static_cast<size_t>(v)] = first_hit(state, i, shape.vertex(v), back);
      }
      return row[static_cast<size_t>(k)];
    };

    for (const PusherSlot& slot : slots) {
      double share_full = 0.0;
      for (int i : slot.affected) share_full += share[static_cast<size_t>(i)];
      std::vector<double> share_mode(modes.size(), 0.0);
      bool any_needed = false;
      for (size_t m = 0; m < modes.size(); ++m) {
        if (modes[m].is_global()) {
          share_mode[m] = share_full;
        } else {
          for (int i : slot.affected)
            if (assignment.region_of[static_cast<size_t>(i)] == modes[m].region)
              share_mode[m] += share[static_cast<size_t>(i)];
        }
        if (share_mode[m] > best[m].reduction + kMinGain) any_needed = true;
      }
      if (!any_needed) continue;

      if (config.reachability_guard) {
        bool all_reach = true;
        for (int i : slot.affected)
          if (!reach_ok[static_cast<size_t>(i)]) {
            all_reach = false;
            break;
          }
        if (!all_reach) continue;
      }

      // Anchor at the cell midpoint, sliding within the cell when the body
      // collides or falls outside the reachable set.
      double alpha = kInf;
      Vec2 anchor;
      for (double q : {0.5, 0.75, 0.25}) {
        const double cand = slot.alpha_lo + q * (slot.alpha_hi - slot.alpha_lo);
        const Vec2 pos = slot.dir * cand + slot.perp * slot.beta;
        if (!map.reach(pos)) continue;
        const ConvexPolygon body = slot.body_at(cand, config.pusher);
        const auto bb = body.bounding_box();
        bool clear = true;
        for (int i = 0; i < n && clear; ++i)
          if (bbox_overlap(bb, obj_bbox[static_cast<size_t>(i)]) &&
              polygons_overlap(body, state.objects[static_cast<size_t>(i)].shape))
            clear = false;
        if (!clear) continue;
        alpha = cand;
        anchor = pos;
        break;
      }
      if (alpha == kInf) continue;

      CompressionSolver solver(state, slot.affected, alpha, sup.smin, hit_at);
      std::vector<double> dbar(slot.affected.size(), 0.0);
      double d_hi = map.range(anchor, u).second;
      for (size_t k = 0; k < slot.affected.size(); ++k) {
        dbar[k] = solver.dbar(slot.affected[k]);
        if (config.reachability_guard)
          d_hi = std::min(d_hi, dbar[k] + forward[static_cast<size_t>(slot.affected[k])]);
      }
      if (d_hi <= 1e-12) continue;

      std::vector<PiecewiseCost::Term> terms;
      terms.reserve(slot.affected.size());
      for (size_t k = 0; k < slot.affected.size(); ++k) {
        const int i = slot.affected[k];
        terms.push_back(make_term(state, i, assignment.region_of[static_cast<size_t>(i)],
                                  dbar[k], u, d_hi));
      }
      const PiecewiseCost cost(std::move(terms), d_hi);

      std::vector<std::vector<int>> queries;
      std::vector<size_t> query_mode;
      for (size_t m = 0; m < modes.size(); ++m) {
        if (share_mode[m] <= best[m].reduction + kMinGain) continue;
        std::vector<int> ids;
        for (size_t t = 0; t < cost.terms().size(); ++t)
          if (modes[m].is_global() || cost.terms()[t].region == modes[m].region)
            ids.push_back(static_cast<int>(t));
        if (ids.empty()) continue;
        queries.push_back(std::move(ids));
        query_mode.push_back(m);
      }
      if (queries.empty()) continue;

      const auto results = minimize_shared(cost, queries, 0.0, d_hi, &share_full);
      for (size_t qi = 0; qi < results.size(); ++qi) {
        if (!results[qi]) continue;
        const auto [d_star, value] = *results[qi];
        const size_t m = query_mode[qi];
        const double reduction = share_mode[m] - value;
        if (reduction <= kMinGain || reduction <= best[m].reduction) continue;
        PushAction act;
        act.direction_index = di;
        act.direction = u.vec();
        act.anchor = anchor;
        act.travel = d_star;
        act.width = config.pusher.width;
        act.thickness = config.pusher.thickness;
        act.affected = slot.affected;
        act.displacements.resize(slot.affected.size());
        for (size_t k = 0; k < slot.affected.size(); ++k)
          act.displacements[k] = std::max(0.0, d_star - dbar[k]);
        best[m] = {true, reduction, std::move(act)};
      }
    }
  }

  for (size_t m = 0; m < modes.size(); ++m) {
    if (!best[m].found) continue;
    best[m].act.predicted_cost = compute_cost(apply_displacements(state, best[m].act)).total_cost;
    out[m] = std::move(best[m].act);
  }
  return out;
}

std::optional<PushAction> plan_push(const SceneState& state, const PushPlannerConfig& config,
                                    const ReachabilityMap& map, const Assignment& assignment,
                                    PlanMode mode) {
  return plan_push_batch(state, config, map, assignment, {mode})[0];
}

}  // namespace pushsort
