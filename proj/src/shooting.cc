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

#include "pmpnav/shooting.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>
#include <utility>

namespace pmpnav {

std::string_view to_string(ExtremalKind kind) {
  return kind == ExtremalKind::kInner ? "inner" : "boundary";
}

std::string_view to_string(MatchOutcome outcome) {
  switch (outcome) {
    case MatchOutcome::kMatched: return "matched";
    case MatchOutcome::kNotReached: return "not_reached";
    case MatchOutcome::kResidual: return "residual";
    case MatchOutcome::kInvariant: return "invariant";
    case MatchOutcome::kDuplicate: return "duplicate";
  }
  return "unknown";
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const unsigned count = std::min<std::size_t>(threads, n);
  pool.reserve(count);
  for (unsigned w = 0; w < count; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t;
}

double angle_distance(double a, double b) {
  const double d = std::abs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, kTwoPi - d);
}

double contact_mu(const Trajectory& traj, const FlowField& flow) {
  if (traj.termination.kind != EventKind::kBoundaryContact) return kInf;
  const PhasePoint& p = traj.back();
  try {
    return std::abs(boundary_multiplier(p.psi, flow.eval(p.x).x()));
  } catch (const RegularityViolation&) {
    return kInf;
  }
}

// Indices of finite local minima on the circular grid. A plateau of equal
// minima is reported once, at its first index.
std::vector<std::size_t> local_minima(const std::vector<double>& s) {
  const std::size_t n = s.size();
  std::vector<bool> is_min(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = s[(i + n - 1) % n];
    const double next = s[(i + 1) % n];
    is_min[i] = std::isfinite(s[i]) && s[i] <= prev && s[i] <= next;
  }
  std::vector<std::size_t> out;
  const bool all = std::all_of(is_min.begin(), is_min.end(),
                               [](bool b) { return b; });
  if (all && std::all_of(s.begin(), s.end(),
                         [&](double v) { return v == s.front(); })) {
    if (n > 0) out.push_back(0);
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_min[i]) continue;
    const std::size_t p = (i + n - 1) % n;
    if (is_min[p] && s[p] == s[i]) continue;
    out.push_back(i);
  }
  return out;
}

struct Refined {
  double theta = 0.0;
  double score = kInf;
  int iterations = 0;
};

// Repeated halving of the step around the current best angle: the best of
// {theta - delta, theta, theta + delta} becomes the new centre.
template <class Score>
Refined refine_minimum(double theta, double score, double delta,
                       Score&& score_of) {
  Refined r{theta, score, 0};
  while (delta > kThetaWidthFloor && r.score > 0.0) {
    delta *= 0.5;
    const double left = score_of(r.theta - delta);
    const double right = score_of(r.theta + delta);
    if (left < r.score && left <= right) {
      r.theta -= delta;
      r.score = left;
    } else if (right < r.score) {
      r.theta += delta;
      r.score = right;
    }
    ++r.iterations;
  }
  r.theta = wrap_angle(r.theta);
  return r;
}

struct MinimumTask {
  CandidateKind kind;
  int side;
  std::size_t index;
};

SweepResult sweep(const ProblemSpec& spec, Direction phase,
                  bool want_inner_hits, const SweepOptions& options) {
  const std::vector<double> grid = theta_grid(spec.tol.theta_step);
  const double delta = grid.size() > 1 ? grid[1] - grid[0] : kTwoPi;
  const std::size_t n = grid.size();

  SweepResult result;
  result.phase = phase;
  result.samples.resize(n);
  parallel_for(n, options.threads, [&](std::size_t i) {
    const Trajectory traj = shoot(spec, phase, grid[i]);
    SweepSample& s = result.samples[i];
    s.phase = phase;
    s.theta = grid[i];
    s.distance = traj.min_target_distance;
    s.contact_mu = contact_mu(traj, spec.flow);
    s.side = traj.termination.kind == EventKind::kBoundaryContact
                 ? traj.termination.side
                 : 0;
    s.termination = traj.termination.kind;
  });

  std::vector<MinimumTask> tasks;
  if (want_inner_hits) {
    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i) dist[i] = result.samples[i].distance;
    for (std::size_t i : local_minima(dist)) {
      tasks.push_back({CandidateKind::kInnerHit, 0, i});
    }
  }
  for (int side : {1, -1}) {
    std::vector<double> mu(n, kInf);
    for (std::size_t i = 0; i < n; ++i) {
      if (result.samples[i].side == side) mu[i] = result.samples[i].contact_mu;
    }
    for (std::size_t i : local_minima(mu)) {
      tasks.push_back({CandidateKind::kJunctionTouch, side, i});
    }
  }

  std::vector<Refined> refined(tasks.size());
  parallel_for(tasks.size(), options.threads, [&](std::size_t k) {
    const MinimumTask& task = tasks[k];
    const SweepSample& s = result.samples[task.index];
    if (task.kind == CandidateKind::kInnerHit) {
      refined[k] = refine_minimum(s.theta, s.distance, delta, [&](double th) {
        return shoot(spec, phase, th).min_target_distance;
      });
    } else {
      refined[k] = refine_minimum(s.theta, s.contact_mu, delta, [&](double th) {
        const Trajectory t = shoot(spec, phase, th);
        return t.termination.side == task.side ? contact_mu(t, spec.flow)
                                               : kInf;
      });
    }
  });

  for (std::size_t k = 0; k < tasks.size(); ++k) {
    const MinimumTask& task = tasks[k];
    const Refined& r = refined[k];
    result.bisection_iterations += r.iterations;
    const double tol = task.kind == CandidateKind::kInnerHit ? spec.tol.hit_tol
                                                             : spec.tol.mu_tol;
    if (!(r.score < tol)) {
      ++result.rejected_minima;
      continue;
    }
    const bool duplicate = std::any_of(
        result.candidates.begin(), result.candidates.end(),
        [&](const SweepCandidate& c) {
          return c.kind == task.kind && c.side == task.side &&
                 angle_distance(c.theta, r.theta) < 1e-9;
        });
    if (duplicate) continue;

    SweepCandidate c;
    c.theta = r.theta;
    c.trajectory = shoot(spec, phase, r.theta);
    c.kind = task.kind;
    c.side = task.side;
    c.score = r.score;
    const bool consistent =
        task.kind == CandidateKind::kInnerHit
            ? c.trajectory.termination.kind == EventKind::kTargetReached
            : c.trajectory.termination.kind == EventKind::kBoundaryContact &&
                  c.trajectory.termination.side == task.side;
    if (!consistent) {
      ++result.rejected_minima;
      continue;
    }
    result.candidates.push_back(std::move(c));
  }
  std::sort(result.candidates.begin(), result.candidates.end(),
            [](const SweepCandidate& a, const SweepCandidate& b) {
              return a.theta < b.theta;
            });
  return result;
}

}  // namespace

std::vector<double> theta_grid(double step) {
  const auto n = static_cast<std::size_t>(std::ceil(kTwoPi / step - 1e-9));
  std::vector<double> grid(n);
  for (std::size_t k = 0; k < n; ++k) grid[k] = kTwoPi * k / n;
  return grid;
}

Trajectory shoot(const ProblemSpec& spec, Direction direction, double theta) {
  PhasePoint start;
  start.x = direction == Direction::kForward ? spec.a : spec.b;
  start.psi = Vec2(std::sin(theta), std::cos(theta));
  start.mu = 0.0;
  const Vec2 target = direction == Direction::kForward ? spec.b : spec.a;
  return integrate_inner(start, direction, spec, target);
}

SweepResult backward_sweep(const ProblemSpec& spec,
                           const SweepOptions& options) {
  return sweep(spec, Direction::kBackward, true, options);
}

SweepResult forward_sweep(const ProblemSpec& spec, const SweepOptions& options) {
  return sweep(spec, Direction::kForward, false, options);
}

// ---------------------------------------------------------------------------
// Assembly

namespace {

// Backward arc in forward time starting at t0, with psi mapped to the
// forward normalization: psi -> psi / scale + mu e1, mu -> mu.
Trajectory reverse_backward_arc(const Trajectory& bwd, double t0, double scale,
                                double mu) {
  Trajectory out;
  out.direction = Direction::kBackward;
  out.arc = ArcType::kInner;
  out.termination = bwd.termination;
  const double tau_end = bwd.back().t;
  out.points.reserve(bwd.points.size());
  for (auto it = bwd.points.rbegin(); it != bwd.points.rend(); ++it) {
    PhasePoint p = *it;
    p.t = t0 + (tau_end - it->t);
    p.psi = it->psi / scale + Vec2(mu, 0.0);
    p.mu = mu;
    out.points.push_back(p);
  }
  return out;
}

double hamiltonian_at(const PhasePoint& p, const FlowField& flow) {
  return hamiltonian(p.x, p.u, p.psi, p.mu, flow);
}

}  // namespace

double multiplier_backtrack(const Trajectory& arc) {
  if (arc.arc != ArcType::kBoundary || arc.points.empty()) return 0.0;
  const int side = arc.termination.side;
  // -side * mu must be non-decreasing; track its running maximum.
  double best = -side * arc.points.front().mu;
  double backtrack = 0.0;
  for (const PhasePoint& p : arc.points) {
    const double m = -side * p.mu;
    best = std::max(best, m);
    backtrack = std::max(backtrack, best - m);
  }
  return backtrack;
}

Extremal make_inner_extremal(const SweepCandidate& hit) {
  Extremal e;
  e.kind = ExtremalKind::kInner;
  e.arcs.push_back(reverse_backward_arc(hit.trajectory, 0.0, 1.0, 0.0));
  e.T = hit.trajectory.duration();
  e.theta_b = hit.theta;
  return e;
}

std::optional<std::string> verify_extremal(const Extremal& e,
                                           const ProblemSpec& spec) {
  if (e.arcs.empty() || e.arcs.front().points.empty())
    return "extremal has no points";
  const ToleranceSet& tol = spec.tol;
  const PhasePoint& first = e.arcs.front().front();
  const PhasePoint& last = e.arcs.back().back();
  if ((first.x - spec.a).norm() > tol.hit_tol) return "does not start at A";
  if ((last.x - spec.b).norm() > tol.hit_tol) return "does not end at B";
  if (std::abs(first.t) > 1e-12 || std::abs(last.t - e.T) > 1e-9)
    return "global time does not span [0, T]";
  if (e.lambda < 0.0) return "negative Hamiltonian level";

  double h_min = kInf;
  double h_max = -kInf;
  double t_prev = -kInf;
  for (std::size_t k = 0; k < e.arcs.size(); ++k) {
    const Trajectory& arc = e.arcs[k];
    if (arc.points.empty()) return "empty arc";
    if (k > 0) {
      const PhasePoint& a = e.arcs[k - 1].back();
      const PhasePoint& b = arc.front();
      if ((a.x - b.x).norm() > tol.hit_tol) return "arcs disagree in position";
      if (std::abs(a.t - b.t) > 1e-9) return "arcs disagree in time";
      try {
        const Vec2 pb(b.psi.x() - b.mu, b.psi.y());
        if (junction_residual(pb, a.psi, a.mu) > tol.junction_tol)
          return "arcs disagree in adjoint direction";
      } catch (const DegenerateAdjoint&) {
        return "degenerate adjoint at an arc junction";
      }
    }
    const double mu0 = arc.front().mu;
    for (std::size_t i = 0; i < arc.points.size(); ++i) {
      const PhasePoint& p = arc.points[i];
      if (p.t < t_prev - 1e-12) return "global time decreases";
      t_prev = p.t;
      if (std::abs(p.u.norm() - 1.0) > 1e-9) return "control off the unit circle";
      if (std::abs(p.x.x()) > spec.half_width + tol.hit_tol)
        return "leaves the corridor";
      const double rho = std::hypot(p.psi.x() - p.mu, p.psi.y());
      if (!(rho > kDegeneracyFloor)) return "degenerate adjoint";
      if (!(e.lambda + rho > 0.0)) return "trivial multipliers";
      const double h = hamiltonian_at(p, spec.flow);
      h_min = std::min(h_min, h);
      h_max = std::max(h_max, h);
      if (arc.arc == ArcType::kInner) {
        if (std::abs(p.mu - mu0) > 1e-12) return "mu varies on an inner arc";
      } else {
        const int side = arc.termination.side;
        if (side * p.mu > tol.mu_tol)
          return "mu on the wrong side of zero on the boundary arc";
        if (std::abs(p.x.x() - side * spec.half_width) > 1e-9)
          return "boundary arc leaves the wall";
      }
    }
  }
  if (h_max - h_min > 1e-3) return "Hamiltonian drifts";
  if (e.junction) {
    const JunctionData& j = *e.junction;
    if (std::abs(j.entry_mu) > tol.mu_tol) return "mu jumps at entry";
    if (std::abs(j.exit_mu) > tol.mu_tol) return "mu jumps at exit";
    if (j.residual > tol.junction_tol) return "junction residual too large";
  }
  return std::nullopt;
}

std::vector<Extremal> assemble_boundary_extremals(
    const std::vector<SweepCandidate>& fwd,
    const std::vector<SweepCandidate>& bwd, const ProblemSpec& spec,
    Diagnostics* diag) {
  std::vector<Extremal> out;
  for (const SweepCandidate& f : fwd) {
    if (f.kind != CandidateKind::kJunctionTouch) continue;
    for (const SweepCandidate& b : bwd) {
      if (b.kind != CandidateKind::kJunctionTouch || b.side != f.side) continue;

      MatchAttempt attempt;
      attempt.side = f.side;
      attempt.theta_f = f.theta;
      attempt.theta_b = b.theta;

      const PhasePoint& entry = f.trajectory.back();
      const PhasePoint& exit_b = b.trajectory.back();
      const double target_x2 = exit_b.x.y();

      Trajectory wall;
      if (std::abs(entry.x.y() - target_x2) <= spec.tol.hit_tol) {
        // Contacts coincide: a boundary arc of zero length.
        wall.arc = ArcType::kBoundary;
        PhasePoint p = entry;
        try {
          const double v1 = spec.flow.eval(p.x).x();
          p.mu = boundary_multiplier(p.psi, v1);
          p.u = boundary_control(p.psi.y(), v1);
          wall.termination.kind = EventKind::kStopCondition;
        } catch (const std::runtime_error&) {
          wall.termination.kind = EventKind::kDegenerate;
        }
        wall.termination.side = f.side;
        wall.termination.t = p.t;
        wall.termination.x = p.x;
        wall.points.push_back(p);
      } else {
        wall = integrate_boundary(
            entry, f.side, spec,
            [target_x2](const PhasePoint& p) { return p.x.y() - target_x2; });
      }
      attempt.boundary_stop = wall.termination.kind;
      if (wall.termination.kind != EventKind::kStopCondition) {
        attempt.outcome = MatchOutcome::kNotReached;
        if (diag) diag->attempts.push_back(attempt);
        continue;
      }

      const PhasePoint& p = wall.back();
      const Vec2 shifted(p.psi.x() - p.mu, p.psi.y());
      try {
        attempt.residual = junction_residual(exit_b.psi, p.psi, p.mu);
      } catch (const DegenerateAdjoint&) {
        attempt.residual = kInf;
      }
      if (!(attempt.residual < spec.tol.junction_tol)) {
        attempt.outcome = MatchOutcome::kResidual;
        if (diag) diag->attempts.push_back(attempt);
        continue;
      }

      Extremal e;
      e.kind = ExtremalKind::kBoundary;
      e.theta_f = f.theta;
      e.theta_b = b.theta;
      const double scale = exit_b.psi.norm() / shifted.norm();
      e.arcs.push_back(f.trajectory);
      e.arcs.push_back(wall);
      e.arcs.push_back(reverse_backward_arc(b.trajectory, p.t, scale, p.mu));
      e.T = e.arcs.back().back().t;
      e.lambda = hamiltonian_at(e.arcs.front().front(), spec.flow);

      JunctionData j;
      j.side = f.side;
      j.entry_t = entry.t;
      j.entry_x = entry.x;
      j.entry_mu = f.score;
      j.exit_t = p.t;
      j.exit_x = exit_b.x;
      j.exit_mu = b.score;
      j.residual = attempt.residual;
      j.adjoint_scale = scale;
      e.junction = j;

      if (auto failure = verify_extremal(e, spec)) {
        attempt.outcome = MatchOutcome::kInvariant;
        attempt.detail = *failure;
        if (diag) diag->attempts.push_back(attempt);
        continue;
      }
      attempt.outcome = MatchOutcome::kMatched;
      if (diag) diag->attempts.push_back(attempt);
      out.push_back(std::move(e));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Orchestration

namespace {

Vec2 position_at(const Extremal& e, double t) {
  const PhasePoint* prev = nullptr;
  for (const Trajectory& arc : e.arcs) {
    for (const PhasePoint& p : arc.points) {
      if (p.t >= t) {
        if (!prev || p.t <= prev->t) return p.x;
        const double w = (t - prev->t) / (p.t - prev->t);
        return (1.0 - w) * prev->x + w * p.x;
      }
      prev = &p;
    }
  }
  return e.arcs.back().back().x;
}

bool coincide(const Extremal& a, const Extremal& b, double tol) {
  if (a.kind != b.kind || std::abs(a.T - b.T) > tol) return false;
  constexpr int kSamples = 64;
  for (int k = 0; k <= kSamples; ++k) {
    const double s = static_cast<double>(k) / kSamples;
    if ((position_at(a, s * a.T) - position_at(b, s * b.T)).norm() > tol)
      return false;
  }
  return true;
}

}  // namespace

std::size_t ExtremalField::count(ExtremalKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(extremals.begin(), extremals.end(),
                    [kind](const Extremal& e) { return e.kind == kind; }));
}

ExtremalField solve(const ProblemSpec& spec, const SweepOptions& options) {
  spec.validate();

  ExtremalField field;
  field.problem = spec;
  Diagnostics& diag = field.diagnostics;

  const SweepResult bwd = backward_sweep(spec, options);
  const SweepResult fwd = forward_sweep(spec, options);
  diag.angles_swept = static_cast<int>(bwd.samples.size() + fwd.samples.size());
  diag.bisection_iterations = bwd.bisection_iterations + fwd.bisection_iterations;
  diag.rejected_minima = bwd.rejected_minima + fwd.rejected_minima;
  diag.samples = bwd.samples;
  diag.samples.insert(diag.samples.end(), fwd.samples.begin(), fwd.samples.end());

  std::vector<Extremal> found;
  for (const SweepCandidate& c : bwd.candidates) {
    if (c.kind != CandidateKind::kInnerHit) continue;
    Extremal e = make_inner_extremal(c);
    e.lambda = hamiltonian_at(e.arcs.front().front(), spec.flow);
    if (auto failure = verify_extremal(e, spec)) {
      ++diag.rejected_extremals;
      diag.rejection_notes.push_back("inner theta_b=" + std::to_string(c.theta) +
                                     ": " + *failure);
      continue;
    }
    found.push_back(std::move(e));
  }

  std::vector<Extremal> boundary =
      assemble_boundary_extremals(fwd.candidates, bwd.candidates, spec, &diag);
  for (Extremal& e : boundary) found.push_back(std::move(e));

  for (Extremal& e : found) {
    const bool dup = std::any_of(
        field.extremals.begin(), field.extremals.end(),
        [&](const Extremal& kept) { return coincide(kept, e, spec.tol.hit_tol); });
    if (dup) {
      for (MatchAttempt& a : diag.attempts) {
        if (e.theta_f && a.outcome == MatchOutcome::kMatched &&
            a.theta_f == *e.theta_f && a.theta_b == *e.theta_b) {
          a.outcome = MatchOutcome::kDuplicate;
        }
      }
      continue;
    }
    field.extremals.push_back(std::move(e));
  }

  auto record_touches = [&](const SweepResult& sweep) {
    for (const SweepCandidate& c : sweep.candidates) {
      if (c.kind != CandidateKind::kJunctionTouch) continue;
      TouchRecord t;
      t.phase = sweep.phase;
      t.theta = c.theta;
      t.side = c.side;
      t.contact = c.trajectory.back().x;
      t.mu = c.score;
      t.matched = std::any_of(
          field.extremals.begin(), field.extremals.end(), [&](const Extremal& e) {
            if (e.kind != ExtremalKind::kBoundary) return false;
            return sweep.phase == Direction::kForward ? e.theta_f == c.theta
                                                      : e.theta_b == c.theta;
          });
      diag.touches.push_back(t);
    }
  };
  record_touches(bwd);
  record_touches(fwd);

  if (field.extremals.empty()) {
    throw NoExtremalFound("no extremal survived both sweeps", std::move(diag));
  }
  std::sort(field.extremals.begin(), field.extremals.end(),
            [](const Extremal& a, const Extremal& b) {
              if (a.kind != b.kind) return a.kind == ExtremalKind::kInner;
              return a.T < b.T;
            });
  field.optimal_index = static_cast<std::size_t>(
      std::min_element(field.extremals.begin(), field.extremals.end(),
                       [](const Extremal& a, const Extremal& b) {
                         return a.T < b.T;
                       }) -
      field.extremals.begin());
  return field;
}

}  // namespace pmpnav
