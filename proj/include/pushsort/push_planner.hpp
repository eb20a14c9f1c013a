#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pushsort/assignment.hpp"
#include "pushsort/reachability.hpp"
#include "pushsort/scene.hpp"

namespace pushsort {

// Rectangular pusher, width measured across the push direction. The anchor
// coordinate of a placement is the support of the pusher's front face along
// the push direction, so the body occupies [alpha - thickness, alpha].
struct Pusher {
  double width = 0.08;
  double thickness = 0.02;
};

struct PushPlannerConfig {
  Pusher pusher;
  int directions = 8;  // evenly spaced around the circle
  // Cap travel so no affected object's center leaves the reachable set.
  bool reachability_guard = true;
};

// One cell of the semi-discrete pusher placement enumeration: over the whole
// alpha x beta rectangle the affected set, the boundary set, and the
// front/behind classification of every object are invariant. alpha and beta
// hold the representative anchor (interval midpoints; the planner may slide
// alpha to another quantile of the interval when the midpoint collides).
struct PusherSlot {
  int direction_index = 0;
  Vec2 dir;   // unit push direction
  Vec2 perp;  // dir rotated a quarter turn counterclockwise
  double alpha_lo = 0.0, alpha_hi = 0.0, alpha = 0.0;
  double beta_lo = 0.0, beta_hi = 0.0, beta = 0.0;
  int alpha_index = 0, beta_index = 0;  // enumeration cell ids for tie-breaks
  std::vector<int> affected;            // ascending object ids
  std::vector<int> boundary;            // partially in the swept strip; never moved

  Vec2 anchor() const { return dir * alpha + perp * beta; }
  // Pusher body polygon for an anchor at the given alpha.
  ConvexPolygon body_at(double alpha_pos, const Pusher& pusher) const;
};

// All valid pusher slots for one direction: non-empty affected set, no
// in-strip object overlapping the pusher body, deduplicated by affected set
// (keeping the largest representative alpha, ties to the earliest cell).
// Purely geometric; reachability and body collision against out-of-strip
// objects are applied by plan_push.
std::vector<PusherSlot> enumerate_slots(const SceneState& state, const Pusher& pusher,
                                        const Direction& dir, int direction_index = 0);

// Minimal pusher travel before object i starts to move: direct gap to the
// pusher face, or transmission through chains of affected objects hit by
// backward rays from i's vertices. Rays whose first hit is not affected
// contribute nothing.
double compression_distance(const SceneState& state, const PusherSlot& slot, int object);

// Quadratic surrogate of one object's squared center-to-region distance over
// one travel interval.
struct QuadPiece {
  double lo = 0.0, hi = 0.0;
  double a = 0.0, b = 0.0, c = 0.0;  // a*d^2 + b*d + c

  double eval(double d) const { return (a * d + b) * d + c; }
};

// Post-push cost of a set of objects as a function of pusher travel d: per
// object a void piece of length dbar followed by one quadratic piece per
// region feature crossed by the center path. Each quadratic is the exact
// squared center-to-region distance on its interval, so value_at is the exact
// Euclidean sum; the surrogate only differs by summing squares instead of
// roots.
class PiecewiseCost {
 public:
  struct Term {
    int object = -1;
    int region = 0;
    double dbar = 0.0;
    Vec2 start;  // center at d = 0
    Vec2 dir;
    std::vector<QuadPiece> pieces;  // contiguous over [0, horizon]
  };

  PiecewiseCost(std::vector<Term> terms, double horizon);

  const std::vector<Term>& terms() const { return terms_; }
  double horizon() const { return horizon_; }

  // Exact Euclidean sum at travel d, evaluated through the piece polynomials.
  double value_at(double d) const;
  // Exact Euclidean sum at travel d, evaluated against the region polygons.
  // Agrees with value_at; kept separate as an independent cross-check.
  double exact_at(double d, const SceneState& state) const;
  // Sum of the quadratic surrogates at travel d.
  double surrogate_at(double d) const;
  // Ascending union of all piece boundaries, clamped to [0, horizon].
  std::vector<double> breakpoints() const;

 private:
  std::vector<Term> terms_;
  double horizon_ = 0.0;
};

// Post-push cost terms for the slot's affected objects, each measured against
// the region the assignment binds it to. Global mode keeps every affected
// object; target mode keeps those assigned to the given region. The horizon
// is the travel upper bound the caller plans within.
PiecewiseCost build_cost(const SceneState& state, const PusherSlot& slot,
                         const Assignment& assignment, PlanMode mode, double horizon);

// Exact minimizer of the piecewise cost over [interval.first,
// interval.second]: per piece, the endpoints, the surrogate vertex, and (when
// the exact derivative brackets a sign change) a bisection refinement are all
// compared by exact Euclidean sums. Ties prefer smaller d. Absent when the
// interval is empty.
std::optional<std::pair<double, double>> minimize_piecewise(const PiecewiseCost& cost,
                                                            std::pair<double, double> interval);

// Exact one-step greedy push under the kinematic model: over all directions,
// slots, and travel distances, maximize the reduction of the mode's objective
// subject to the affected objects' total cost not increasing. Absent when no
// strictly reducing push exists.
std::optional<PushAction> plan_push(const SceneState& state, const PushPlannerConfig& config,
                                    const ReachabilityMap& map, const Assignment& assignment,
                                    PlanMode mode);

// One enumeration pass answering several modes at once (the high-level
// planner asks for every target region of one state). Result i corresponds to
// modes[i].
std::vector<std::optional<PushAction>> plan_push_batch(const SceneState& state,
                                                       const PushPlannerConfig& config,
                                                       const ReachabilityMap& map,
                                                       const Assignment& assignment,
                                                       const std::vector<PlanMode>& modes);

}  // namespace pushsort
