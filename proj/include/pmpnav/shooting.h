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

#ifndef PMPNAV_SHOOTING_H_
#define PMPNAV_SHOOTING_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmpnav/integrator.h"
#include "pmpnav/pmp_core.h"

namespace pmpnav {

// Bisection in theta stops once the bracket half-width falls below this.
inline constexpr double kThetaWidthFloor = 1e-12;

enum class CandidateKind { kInnerHit, kJunctionTouch };

struct SweepCandidate {
  double theta = 0.0;
  Trajectory trajectory;
  // Distance to the far endpoint (kInnerHit) or |mu| at the wall (kJunctionTouch).
  double score = 0.0;
  CandidateKind kind = CandidateKind::kInnerHit;
  int side = 0;
};

// One grid shot as seen by the sweep.
struct SweepSample {
  Direction phase = Direction::kBackward;
  double theta = 0.0;
  double distance = 0.0;     // closest approach to the far endpoint
  double contact_mu = 0.0;   // |mu| at the wall, +inf without contact
  int side = 0;              // wall hit, 0 if none
  EventKind termination = EventKind::kHorizonExceeded;
};

struct SweepResult {
  Direction phase = Direction::kBackward;
  std::vector<SweepCandidate> candidates;
  std::vector<SweepSample> samples;
  int bisection_iterations = 0;
  int rejected_minima = 0;

  bool empty() const { return candidates.empty(); }
};

struct SweepOptions {
  unsigned threads = 1;
};

// Uniform grid on the circle [0, 2 pi) whose spacing is the largest
// divisor of 2 pi not exceeding `step`.
std::vector<double> theta_grid(double step);

// Shoots one trajectory from b (backward) or a (forward) with
// psi = (sin theta, cos theta) and mu = 0, aimed at the opposite endpoint.
Trajectory shoot(const ProblemSpec& spec, Direction direction, double theta);

// Backward scan from B: returns refined inner hits on A and refined
// tangential wall contacts.
SweepResult backward_sweep(const ProblemSpec& spec,
                           const SweepOptions& options = {});

// Forward scan from A: returns refined tangential wall contacts only.
SweepResult forward_sweep(const ProblemSpec& spec,
                          const SweepOptions& options = {});

enum class ExtremalKind { kInner, kBoundary };

std::string_view to_string(ExtremalKind kind);

struct JunctionData {
  int side = 0;
  double entry_t = 0.0;
  Vec2 entry_x = Vec2::Zero();
  double entry_mu = 0.0;  // forward normalization, mu(0) = 0
  double exit_t = 0.0;
  Vec2 exit_x = Vec2::Zero();
  double exit_mu = 0.0;   // backward normalization, mu(T) = 0
  double residual = 0.0;  // adjoint-direction mismatch at exit
  double adjoint_scale = 1.0;
};

// A complete candidate A -> B. Arcs are stored in global forward time
// (t = 0 at A, t = T at B) under the forward normalization mu(0) = 0; the
// backward arc is rescaled and shifted so psi - mu e1 is continuous at the
// exit junction.
struct Extremal {
  ExtremalKind kind = ExtremalKind::kInner;
  std::vector<Trajectory> arcs;
  double T = 0.0;
  double lambda = 0.0;
  std::optional<double> theta_f;
  std::optional<double> theta_b;
  std::optional<JunctionData> junction;
};

enum class MatchOutcome {
  kMatched,
  kNotReached,      // the boundary arc stopped before the backward contact
  kResidual,        // reached, but the adjoint directions disagree
  kInvariant,       // assembled but failed verification
  kDuplicate,
};

std::string_view to_string(MatchOutcome outcome);

struct MatchAttempt {
  int side = 0;
  double theta_f = 0.0;
  double theta_b = 0.0;
  MatchOutcome outcome = MatchOutcome::kNotReached;
  EventKind boundary_stop = EventKind::kStopCondition;
  double residual = INFINITY;
  std::string detail;
};

struct TouchRecord {
  Direction phase = Direction::kForward;
  double theta = 0.0;
  int side = 0;
  Vec2 contact = Vec2::Zero();
  double mu = 0.0;
  bool matched = false;
};

struct Diagnostics {
  int angles_swept = 0;
  int bisection_iterations = 0;
  int rejected_minima = 0;
  int rejected_extremals = 0;
  std::vector<std::string> rejection_notes;
  std::vector<MatchAttempt> attempts;
  std::vector<TouchRecord> touches;
  std::vector<SweepSample> samples;
};

// Checks an assembled extremal: endpoints, arc continuity, unit control,
// Hamiltonian constancy, nontriviality, mu constant on inner arcs and on the
// correct side of zero on the boundary arc. Returns a description of the
// first failure.
std::optional<std::string> verify_extremal(const Extremal& e,
                                           const ProblemSpec& spec);

// Largest amount by which mu moves against the direction required on the
// arc's wall (up on x1 = +w, down on x1 = -w). Zero for a monotone arc and
// for inner arcs.
double multiplier_backtrack(const Trajectory& arc);

// Continues each forward wall contact along its wall and joins it to every
// backward contact on the same wall where the adjoint directions agree.
// Appends one MatchAttempt per (forward, backward) pair when `diag` is set.
std::vector<Extremal> assemble_boundary_extremals(
    const std::vector<SweepCandidate>& fwd,
    const std::vector<SweepCandidate>& bwd, const ProblemSpec& spec,
    Diagnostics* diag = nullptr);

// Time-reverses a backward inner hit into an inner extremal.
Extremal make_inner_extremal(const SweepCandidate& hit);

struct ExtremalField {
  std::vector<Extremal> extremals;
  std::size_t optimal_index = 0;
  ProblemSpec problem;
  Diagnostics diagnostics;

  const Extremal& optimal() const { return extremals.at(optimal_index); }
  std::size_t count(ExtremalKind kind) const;
};

class NoExtremalFound : public std::runtime_error {
 public:
  NoExtremalFound(const std::string& what, Diagnostics diag)
      : std::runtime_error(what), diagnostics(std::move(diag)) {}
  Diagnostics diagnostics;
};

// Full two-phase solve. Throws InvalidProblem / RegularityViolation on a bad
// spec and NoExtremalFound when nothing survives.
ExtremalField solve(const ProblemSpec& spec, const SweepOptions& options = {});

}  // namespace pmpnav

#endif  // PMPNAV_SHOOTING_H_
