// Copyright 2026 The pmpnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PMPNAV_INTEGRATOR_H_
#define PMPNAV_INTEGRATOR_H_

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "pmpnav/pmp_core.h"

namespace pmpnav {

enum class Direction { kForward, kBackward };
enum class ArcType { kInner, kBoundary };

enum class EventKind {
  kBoundaryContact,
  kTargetReached,
  kCorridorExit,
  kHorizonExceeded,
  kDegenerate,
  // Boundary arcs only: mu crossed zero to the wrong side for its wall
  // (it must stay <= 0 on x1 = +w and >= 0 on x1 = -w, within mu_tol).
  kMultiplierReversal,
  // Boundary arcs only: the caller's stop function changed sign.
  kStopCondition,
};

std::string_view to_string(EventKind kind);
std::string_view to_string(Direction direction);

struct Event {
  EventKind kind = EventKind::kHorizonExceeded;
  int side = 0;  // wall for kBoundaryContact and boundary arcs
  double t = 0.0;
  Vec2 x = Vec2::Zero();
};

// One integrated arc. `t` is the integration variable: it increases along
// `points` in both directions, and for backward arcs physical time runs
// opposite to it.
struct Trajectory {
  Direction direction = Direction::kForward;
  ArcType arc = ArcType::kInner;
  std::vector<PhasePoint> points;
  Event termination;
  // Smallest distance to the target seen along an inner arc, with localized
  // interior minima.
  double min_target_distance = INFINITY;
  double min_target_time = 0.0;

  const PhasePoint& front() const { return points.front(); }
  const PhasePoint& back() const { return points.back(); }
  double duration() const {
    return points.empty() ? 0.0 : points.back().t - points.front().t;
  }
};

class NoSignChange : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

// Bisection on a scalar condition that changes sign over `bracket`. Returns
// the end of the final bracket lying on the `hi` side of the sign change, so
// the event has happened at the returned time. A zero at either end is
// returned as is. Throws NoSignChange when both ends share a strict sign.
template <class Condition>
double localize_event(Bracket bracket, Condition&& condition,
                      double tol = 1e-9) {
  double lo = bracket.lo;
  double hi = bracket.hi;
  const double c_lo = condition(lo);
  if (c_lo == 0.0) return lo;
  const double c_hi = condition(hi);
  if (c_hi == 0.0) return hi;
  if (std::signbit(c_lo) == std::signbit(c_hi)) {
    throw NoSignChange("localize_event: condition has equal signs at both ends");
  }
  const bool lo_negative = std::signbit(c_lo);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double c = condition(mid);
    if (c == 0.0) return mid;
    if (std::signbit(c) == lo_negative) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

// Resolution of event times inside an RK4 step.
inline constexpr double kEventTimeTol = 1e-12;

// Fixed-step RK4 on the coupled (x, psi) system with mu held constant and the
// control re-synthesized at every stage. Backward integration negates both
// right-hand sides. Stops at the first of: target reached (a local minimum
// of the distance to `target` within hit_tol), wall contact, leaving the
// longitudinal window, the horizon t_max, or a degenerate adjoint.
Trajectory integrate_inner(const PhasePoint& start, Direction direction,
                           const ProblemSpec& spec, const Vec2& target);

// Signed quantity watched along a boundary arc; the arc stops where it
// changes sign.
using BoundaryStop = std::function<double(const PhasePoint&)>;

// Forward-time RK4 along the wall x1 = side * half_width. The control keeps
// the vehicle on the wall and mu is recomputed from the tangency condition
// at every stage.
Trajectory integrate_boundary(const PhasePoint& start, int side,
                              const ProblemSpec& spec,
                              const BoundaryStop& stop);

}  // namespace pmpnav

#endif  // PMPNAV_INTEGRATOR_H_
