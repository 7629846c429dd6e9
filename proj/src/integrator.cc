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

#include "pmpnav/integrator.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace pmpnav {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kBoundaryContact: return "boundary_contact";
    case EventKind::kTargetReached: return "target_reached";
    case EventKind::kCorridorExit: return "corridor_exit";
    case EventKind::kHorizonExceeded: return "horizon_exceeded";
    case EventKind::kDegenerate: return "degenerate";
    case EventKind::kMultiplierReversal: return "multiplier_reversal";
    case EventKind::kStopCondition: return "stop_condition";
  }
  return "unknown";
}

std::string_view to_string(Direction direction) {
  return direction == Direction::kForward ? "forward" : "backward";
}

namespace {

template <class State, class Rhs>
State rk4(const State& y, double h, Rhs&& rhs) {
  const State k1 = rhs(y);
  const State k2 = rhs(State(y + 0.5 * h * k1));
  const State k3 = rhs(State(y + 0.5 * h * k2));
  const State k4 = rhs(State(y + h * k3));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// ---------------------------------------------------------------------------
// Inner arcs: y = (x1, x2, psi1, psi2), mu constant.

using InnerState = Eigen::Vector4d;

struct InnerSystem {
  const FlowField& flow;
  double mu;
  double sign;

  InnerState operator()(const InnerState& y) const {
    const Vec2 x = y.head<2>();
    const Vec2 psi = y.tail<2>();
    const Vec2 u = synthesize_control(psi, mu);
    InnerState dy;
    dy.head<2>() = sign * state_rhs(x, u, flow);
    dy.tail<2>() = sign * adjoint_rhs(x, psi, mu, flow);
    return dy;
  }
};

PhasePoint inner_point(double t, const InnerState& y, double mu) {
  PhasePoint p;
  p.t = t;
  p.x = y.head<2>();
  p.psi = y.tail<2>();
  p.mu = mu;
  p.u = synthesize_control(p.psi, mu);
  return p;
}

// Rate of change of |x - target|^2 / 2 in integration time.
double approach_rate(const PhasePoint& p, const Vec2& target, double sign,
                     const FlowField& flow) {
  return (p.x - target).dot(sign * state_rhs(p.x, p.u, flow));
}

bool outside(const Interval& window, double x2) {
  return x2 < window.lo || x2 > window.hi;
}

}  // namespace

Trajectory integrate_inner(const PhasePoint& start, Direction direction,
                           const ProblemSpec& spec, const Vec2& target) {
  const double sign = direction == Direction::kForward ? 1.0 : -1.0;
  const double w = spec.half_width;
  const double h_nominal = spec.tol.rk_step;
  const double t_end = spec.tol.t_max;
  const Interval window = spec.x2_window();
  const InnerSystem system{spec.flow, start.mu, sign};

  Trajectory traj;
  traj.direction = direction;
  traj.arc = ArcType::kInner;

  auto finish = [&](EventKind kind, int side = 0) {
    traj.termination.kind = kind;
    traj.termination.side = side;
    traj.termination.t = traj.points.back().t;
    traj.termination.x = traj.points.back().x;
    return traj;
  };
  auto track_distance = [&](const PhasePoint& p) {
    const double d = (p.x - target).norm();
    if (d < traj.min_target_distance) {
      traj.min_target_distance = d;
      traj.min_target_time = p.t;
    }
  };

  PhasePoint current = start;
  try {
    current.u = synthesize_control(start.psi, start.mu);
  } catch (const DegenerateAdjoint&) {
    current.u = Vec2::Zero();
    traj.points.push_back(current);
    return finish(EventKind::kDegenerate);
  }
  traj.points.push_back(current);
  track_distance(current);

  if ((current.x - target).norm() <= spec.tol.hit_tol &&
      approach_rate(current, target, sign, spec.flow) >= 0.0) {
    return finish(EventKind::kTargetReached);
  }

  InnerState y;
  y << current.x, current.psi;
  double rate = approach_rate(current, target, sign, spec.flow);

  try {
  while (true) {
    if (current.t >= t_end) return finish(EventKind::kHorizonExceeded);
    const double h = std::min(h_nominal, t_end - current.t);
    const InnerState y_prev = y;
    const double t_prev = current.t;

    auto state_at = [&](double s) { return rk4(y_prev, s, system); };

    PhasePoint next;
    try {
      y = state_at(h);
      next = inner_point(t_prev + h, y, start.mu);
    } catch (const DegenerateAdjoint&) {
      return finish(EventKind::kDegenerate);
    }

    // Candidate events inside (t_prev, t_prev + h], resolved as sub-step s.
    std::optional<double> s_wall;
    int side = 0;
    if (std::abs(next.x.x()) >= w) {
      side = next.x.x() > 0.0 ? 1 : -1;
      s_wall = localize_event(
          {0.0, h},
          [&](double s) { return side * state_at(s)(0) - w; },
          kEventTimeTol);
    } else {
      // A graze can cross the wall and return within one step: look for an
      // interior maximum of side * x1 and test it.
      for (int sd : {1, -1}) {
        const double out0 = sd * sign * constraint_rate(current.x, current.u, spec.flow);
        const double out1 = sd * sign * constraint_rate(next.x, next.u, spec.flow);
        if (!(out0 > 0.0 && out1 <= 0.0)) continue;
        const double s_peak = localize_event(
            {0.0, h},
            [&](double s) {
              const InnerState ys = state_at(s);
              const Vec2 u = synthesize_control(ys.tail<2>(), start.mu);
              return -sd * sign * constraint_rate(ys.head<2>(), u, spec.flow);
            },
            kEventTimeTol);
        if (sd * state_at(s_peak)(0) - w < 0.0) continue;
        side = sd;
        s_wall = localize_event(
            {0.0, s_peak},
            [&](double s) { return side * state_at(s)(0) - w; },
            kEventTimeTol);
        break;
      }
    }

    std::optional<double> s_min;
    const double next_rate = approach_rate(next, target, sign, spec.flow);
    if (rate < 0.0 && next_rate >= 0.0) {
      try {
        s_min = localize_event(
            {0.0, h},
            [&](double s) {
              const PhasePoint p = inner_point(t_prev + s, state_at(s), start.mu);
              return approach_rate(p, target, sign, spec.flow);
            },
            kEventTimeTol);
      } catch (const DegenerateAdjoint&) {
        s_min.reset();
      }
    }
    rate = next_rate;

    if (s_min && (!s_wall || *s_min <= *s_wall)) {
      const PhasePoint p = inner_point(t_prev + *s_min, state_at(*s_min), start.mu);
      track_distance(p);
      if ((p.x - target).norm() <= spec.tol.hit_tol) {
        traj.points.push_back(p);
        return finish(EventKind::kTargetReached);
      }
    }

    if (s_wall) {
      InnerState y_wall = state_at(*s_wall);
      y_wall(0) = side * w;
      PhasePoint p;
      try {
        p = inner_point(t_prev + *s_wall, y_wall, start.mu);
      } catch (const DegenerateAdjoint&) {
        return finish(EventKind::kDegenerate);
      }
      traj.points.push_back(p);
      track_distance(p);
      return finish(EventKind::kBoundaryContact, side);
    }

    current = next;
    traj.points.push_back(current);
    track_distance(current);
    if (outside(window, current.x.y())) return finish(EventKind::kCorridorExit);
  }
  } catch (const DegenerateAdjoint&) {
    return finish(EventKind::kDegenerate);
  }
}

// ---------------------------------------------------------------------------
// Boundary arcs: y = (x2, psi1, psi2), x1 pinned to the wall.

namespace {

using WallState = Eigen::Vector3d;

struct WallSystem {
  const FlowField& flow;
  double x1;

  Vec2 position(const WallState& y) const { return Vec2(x1, y(0)); }

  WallState operator()(const WallState& y) const {
    const Vec2 x = position(y);
    const Vec2 psi = y.tail<2>();
    const Vec2 v = flow.eval(x);
    const Vec2 u = boundary_control(psi.y(), v.x());
    const double mu = boundary_multiplier(psi, v.x());
    WallState dy;
    dy(0) = u.y() + v.y();
    dy.tail<2>() = adjoint_rhs(x, psi, mu, flow);
    return dy;
  }

  PhasePoint point(double t, const WallState& y) const {
    PhasePoint p;
    p.t = t;
    p.x = position(y);
    p.psi = y.tail<2>();
    const double v1 = flow.eval(p.x).x();
    p.mu = boundary_multiplier(p.psi, v1);
    p.u = boundary_control(p.psi.y(), v1);
    return p;
  }
};

}  // namespace

Trajectory integrate_boundary(const PhasePoint& start, int side,
                              const ProblemSpec& spec,
                              const BoundaryStop& stop) {
  const double h_nominal = spec.tol.rk_step;
  const double t_end = spec.tol.t_max;
  const Interval window = spec.x2_window();
  const WallSystem system{spec.flow, side * spec.half_width};

  Trajectory traj;
  traj.direction = Direction::kForward;
  traj.arc = ArcType::kBoundary;

  auto finish = [&](EventKind kind) {
    traj.termination.kind = kind;
    traj.termination.side = side;
    traj.termination.t = traj.points.back().t;
    traj.termination.x = traj.points.back().x;
    return traj;
  };

  WallState y(start.x.y(), start.psi.x(), start.psi.y());
  PhasePoint current;
  try {
    current = system.point(start.t, y);
  } catch (const std::runtime_error&) {
    traj.points.push_back(start);
    return finish(EventKind::kDegenerate);
  }
  traj.points.push_back(current);

  const double gap0 = stop(current);
  if (gap0 == 0.0) return finish(EventKind::kStopCondition);
  const bool gap0_negative = std::signbit(gap0);

  while (true) {
    if (current.t >= t_end) return finish(EventKind::kHorizonExceeded);
    const double h = std::min(h_nominal, t_end - current.t);
    const WallState y_prev = y;
    const double t_prev = current.t;
    auto state_at = [&](double s) { return rk4(y_prev, s, system); };

    PhasePoint next;
    try {
      y = state_at(h);
      next = system.point(t_prev + h, y);
    } catch (const std::runtime_error&) {
      // Either psi2 vanished or |v1| reached 1 on the wall.
      return finish(EventKind::kDegenerate);
    }

    const double gap = stop(next);
    if (gap == 0.0 || std::signbit(gap) != gap0_negative) {
      try {
        const double s = localize_event(
            {0.0, h},
            [&](double s) { return stop(system.point(t_prev + s, state_at(s))); },
            kEventTimeTol);
        traj.points.push_back(system.point(t_prev + s, state_at(s)));
      } catch (const std::runtime_error&) {
        return finish(EventKind::kDegenerate);
      }
      return finish(EventKind::kStopCondition);
    }

    if (side * next.mu > spec.tol.mu_tol) {
      return finish(EventKind::kMultiplierReversal);
    }

    current = next;
    traj.points.push_back(current);
    if (outside(window, current.x.y())) return finish(EventKind::kCorridorExit);
  }
}

}  // namespace pmpnav
