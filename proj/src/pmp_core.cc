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

#include "pmpnav/pmp_core.h"

#include <algorithm>
#include <cmath>

namespace pmpnav {

namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidProblem(std::string(field) + " must be positive and finite");
  }
}

}  // namespace

void ToleranceSet::validate() const {
  require_positive(theta_step, "theta_step");
  require_positive(hit_tol, "hit_tol");
  require_positive(mu_tol, "mu_tol");
  require_positive(junction_tol, "junction_tol");
  require_positive(rk_step, "rk_step");
  require_positive(t_max, "t_max");
  if (theta_step >= 1.0) throw InvalidProblem("theta_step must be < 1 rad");
  if (hit_tol >= 0.1 || mu_tol >= 0.1)
    throw InvalidProblem("hit_tol and mu_tol must be small (< 0.1)");
}

void ProblemSpec::validate() const {
  require_positive(half_width, "half_width");
  tol.validate();
  if (!a.allFinite() || !b.allFinite())
    throw InvalidProblem("endpoints must be finite");
  if (std::abs(a.x()) > half_width)
    throw InvalidProblem("A lies outside the corridor");
  if (std::abs(b.x()) > half_width)
    throw InvalidProblem("B lies outside the corridor");
  const RegularityReport report =
      check_regularity(flow, half_width, 1000, regularity_range());
  if (!report.ok) {
    throw RegularityViolation("|v1| reaches " +
                              std::to_string(1.0 - report.worst_margin) +
                              " on the wall x1 = " +
                              std::to_string(report.worst_side * half_width) +
                              " at x2 = " + std::to_string(report.worst_x2));
  }
}

Interval ProblemSpec::regularity_range() const {
  return {std::min(a.y(), b.y()) - 1.0, std::max(a.y(), b.y()) + 1.0};
}

Interval ProblemSpec::x2_window() const {
  return {std::min(a.y(), b.y()) - tol.hit_tol,
          std::max(a.y(), b.y()) + tol.hit_tol};
}

Vec2 synthesize_control(const Vec2& psi, double mu) {
  const Vec2 p(psi.x() - mu, psi.y());
  const double rho = p.norm();
  if (!(rho > kDegeneracyFloor)) {
    throw DegenerateAdjoint("|(psi1 - mu, psi2)| below degeneracy floor");
  }
  return p / rho;
}

double boundary_multiplier(const Vec2& psi, double v1) {
  if (!(std::abs(v1) < 1.0)) {
    throw RegularityViolation("boundary multiplier needs |v1| < 1");
  }
  return psi.x() + std::abs(psi.y()) * v1 / std::sqrt(1.0 - v1 * v1);
}

Vec2 boundary_control(double psi2, double v1) {
  if (!(std::abs(v1) < 1.0)) {
    throw RegularityViolation("boundary control needs |v1| < 1");
  }
  if (!(std::abs(psi2) > kDegeneracyFloor)) {
    throw DegenerateAdjoint("psi2 vanishes on a boundary arc");
  }
  return Vec2(-v1, std::copysign(std::sqrt(1.0 - v1 * v1), psi2));
}

double hamiltonian(const Vec2& x, const Vec2& u, const Vec2& psi, double mu,
                   const FlowField& f) {
  const Vec2 xdot = u + f.eval(x);
  return psi.dot(xdot) - mu * xdot.x();
}

double constraint_rate(const Vec2& x, const Vec2& u, const FlowField& f) {
  return u.x() + f.eval(x).x();
}

Vec2 state_rhs(const Vec2& x, const Vec2& u, const FlowField& f) {
  return u + f.eval(x);
}

Vec2 adjoint_rhs(const Vec2& x, const Vec2& psi, double mu,
                 const FlowField& f) {
  const Mat2 j = f.jacobian(x);
  return -j.transpose() * psi + mu * j.row(0).transpose();
}

double junction_residual(const Vec2& psi_b, const Vec2& psi_f, double mu_f) {
  const Vec2 shifted(psi_f.x() - mu_f, psi_f.y());
  const double nb = psi_b.norm();
  const double nf = shifted.norm();
  if (!(nb > kDegeneracyFloor) || !(nf > kDegeneracyFloor)) {
    throw DegenerateAdjoint("junction adjoint below degeneracy floor");
  }
  return (psi_b / nb - shifted / nf).norm();
}

}  // namespace pmpnav
