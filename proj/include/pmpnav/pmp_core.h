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

#ifndef PMPNAV_PMP_CORE_H_
#define PMPNAV_PMP_CORE_H_

#include <stdexcept>
#include <string>

#include "pmpnav/flow_field.h"

namespace pmpnav {

// Smallest admissible |(psi1 - mu, psi2)|. Below it the maximum condition no
// longer selects a unique control.
inline constexpr double kDegeneracyFloor = 1e-12;

class DegenerateAdjoint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RegularityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidProblem : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ToleranceSet {
  double theta_step = 0.01;    // shooting-angle grid spacing
  double hit_tol = 1e-3;       // endpoint proximity
  double mu_tol = 1e-3;        // |mu| at a junction
  double junction_tol = 1e-3;  // adjoint-direction mismatch at a junction
  double rk_step = 1e-3;
  double t_max = 50.0;

  // Throws InvalidProblem naming the first offending field.
  void validate() const;

  bool operator==(const ToleranceSet&) const = default;
};

// Time-optimal transfer from a to b inside the corridor |x1| <= half_width.
struct ProblemSpec {
  FlowField flow;
  Vec2 a = Vec2::Zero();
  Vec2 b = Vec2::Zero();
  double half_width = 1.0;
  ToleranceSet tol;

  // Endpoints inside the corridor, tolerances positive and the boundary
  // flow regular (see check_regularity). Throws InvalidProblem or
  // RegularityViolation.
  void validate() const;

  // x2 range used by the default regularity check.
  Interval regularity_range() const;

  // The corridor segment between the endpoints, padded by hit_tol. Arcs
  // leaving it are abandoned.
  Interval x2_window() const;
};

struct PhasePoint {
  double t = 0.0;
  Vec2 x = Vec2::Zero();
  Vec2 psi = Vec2::Zero();
  double mu = 0.0;
  Vec2 u = Vec2::Zero();
};

// Maximizer of <psi - mu e1, u> over the unit disk:
// u = (psi1 - mu, psi2) / |(psi1 - mu, psi2)|.
// Throws DegenerateAdjoint below kDegeneracyFloor.
Vec2 synthesize_control(const Vec2& psi, double mu);

// Value of the state-constraint multiplier on an active arc, obtained by
// requiring the synthesized control to be tangent to the wall (u1 = -v1):
//   mu = psi1 + |psi2| v1 / sqrt(1 - v1^2).
// Throws RegularityViolation for |v1| >= 1.
double boundary_multiplier(const Vec2& psi, double v1);

// Control that keeps x1 fixed: (-v1, sign(psi2) sqrt(1 - v1^2)).
// Throws RegularityViolation for |v1| >= 1, DegenerateAdjoint when psi2 is
// too small to fix the sign.
Vec2 boundary_control(double psi2, double v1);

// <psi, u + v(x)> - mu (u1 + v1(x)). Equals the Hamiltonian level lambda
// along an extremal.
double hamiltonian(const Vec2& x, const Vec2& u, const Vec2& psi, double mu,
                   const FlowField& f);

// u1 + v1(x); vanishes on active boundary arcs.
double constraint_rate(const Vec2& x, const Vec2& u, const FlowField& f);

Vec2 state_rhs(const Vec2& x, const Vec2& u, const FlowField& f);

// Row-vector adjoint equation:
//   dpsi_j/dt = -sum_i psi_i dv_i/dx_j + mu dv_1/dx_j.
Vec2 adjoint_rhs(const Vec2& x, const Vec2& psi, double mu,
                 const FlowField& f);

// Distance between the unit vectors psi_b/|psi_b| and
// (psi_f - mu_f e1)/|psi_f - mu_f e1|. Zero when the multiplier is
// continuous across the junction. Throws DegenerateAdjoint if either vector
// is below kDegeneracyFloor.
double junction_residual(const Vec2& psi_b, const Vec2& psi_f, double mu_f);

}  // namespace pmpnav

#endif  // PMPNAV_PMP_CORE_H_
