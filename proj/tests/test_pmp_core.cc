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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

namespace pmpnav {
namespace {

FlowField V() { return *FlowField::builtin("V"); }
FlowField W() { return *FlowField::builtin("W"); }

void ExpectVecNear(const Vec2& got, const Vec2& want, double tol) {
  EXPECT_NEAR(got.x(), want.x(), tol) << got.transpose();
  EXPECT_NEAR(got.y(), want.y(), tol) << got.transpose();
}

TEST(SynthesizeControl, Examples) {
  ExpectVecNear(synthesize_control({1, 0}, 0), {1, 0}, 0);
  ExpectVecNear(synthesize_control({3, 4}, 3), {0, 1}, 0);
  ExpectVecNear(synthesize_control({1, 1}, 0),
                {std::sqrt(0.5), std::sqrt(0.5)}, 1e-15);
}

TEST(SynthesizeControl, DegenerateBelowFloor) {
  EXPECT_THROW(synthesize_control({0, 0}, 0), DegenerateAdjoint);
  EXPECT_THROW(synthesize_control({2, 0}, 2), DegenerateAdjoint);
  EXPECT_THROW(synthesize_control({1e-13, 0}, 0), DegenerateAdjoint);
  EXPECT_NO_THROW(synthesize_control({1e-11, 0}, 0));
}

TEST(SynthesizeControl, UnitNormAndScaleInvariance) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int i = 0; i < 1000; ++i) {
    const Vec2 psi(g(rng), g(rng));
    const double mu = g(rng);
    const Vec2 u = synthesize_control(psi, mu);
    EXPECT_NEAR(u.norm(), 1.0, 1e-15);
    for (double k : {1e-6, 1.0, 1e6}) {
      ExpectVecNear(synthesize_control(k * psi, k * mu), u, 1e-12);
    }
  }
}

TEST(BoundaryMultiplier, Examples) {
  EXPECT_DOUBLE_EQ(boundary_multiplier({0.5, 2}, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(boundary_multiplier({0, 1}, 0.6), 0.75);
  EXPECT_DOUBLE_EQ(boundary_multiplier({1, -2}, 0.6), 2.5);
}

TEST(BoundaryMultiplier, IrregularFlowThrows) {
  EXPECT_THROW(boundary_multiplier({0, 1}, 1.0), RegularityViolation);
  EXPECT_THROW(boundary_multiplier({0, 1}, -1.2), RegularityViolation);
}

TEST(BoundaryControl, Examples) {
  ExpectVecNear(boundary_control(-1, 0), {0, -1}, 0);
  ExpectVecNear(boundary_control(1, 0.6), {-0.6, 0.8}, 1e-15);
  ExpectVecNear(boundary_control(-5, -0.5), {0.5, -std::sqrt(0.75)}, 1e-15);
}

TEST(BoundaryControl, Errors) {
  EXPECT_THROW(boundary_control(1, 1.0), RegularityViolation);
  EXPECT_THROW(boundary_control(0.0, 0.3), DegenerateAdjoint);
}

TEST(BoundaryControl, KeepsStateOnWall) {
  const FlowField w = W();
  for (double x2 = -6; x2 <= 0; x2 += 0.37) {
    for (int side : {-1, 1}) {
      const Vec2 x(side, x2);
      const double v1 = w.eval(x).x();
      const Vec2 u = boundary_control(-0.8, v1);
      EXPECT_EQ(constraint_rate(x, u, w), 0.0);
      EXPECT_NEAR(u.norm(), 1.0, 1e-15);
    }
  }
}

// Substituting the boundary multiplier into the synthesis gives u1 = -v1.
TEST(BoundaryMultiplier, RoundTripsThroughSynthesis) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> v(-0.95, 0.95);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 psi(g(rng), g(rng));
    const double v1 = v(rng);
    const double mu = boundary_multiplier(psi, v1);
    const Vec2 u = synthesize_control(psi, mu);
    EXPECT_NEAR(u.x(), -v1, 1e-12);
    ExpectVecNear(u, boundary_control(psi.y(), v1), 1e-12);
  }
}

TEST(Hamiltonian, Examples) {
  EXPECT_DOUBLE_EQ(hamiltonian({0, 0}, {0, -1}, {0, -1}, 0, V()), 1.0);
  EXPECT_DOUBLE_EQ(hamiltonian({0.4, -3}, {0.6, 0.8}, {0, 0}, 0, W()), 0.0);
  EXPECT_DOUBLE_EQ(hamiltonian({1, 0}, {0, -1}, {0, -1}, 0, V()), 2.0);
}

TEST(Hamiltonian, MultiplierTermVanishesOnTheWall) {
  const Vec2 x(1, 0.3);
  const double v1 = W().eval(x).x();
  const Vec2 u = boundary_control(-1, v1);
  const Vec2 psi(0.2, -1);
  EXPECT_DOUBLE_EQ(hamiltonian(x, u, psi, 0.0, W()),
                   hamiltonian(x, u, psi, 17.0, W()));
}

TEST(StateRhs, Examples) {
  ExpectVecNear(state_rhs({0, 0}, {0, -1}, V()), {0, -1}, 0);
  ExpectVecNear(state_rhs({1, 0}, {0, -1}, V()), {0, -2}, 0);
  ExpectVecNear(state_rhs({1, 0.5}, {-0.5, std::sqrt(0.75)}, W()),
                {0, std::sqrt(0.75) - 1}, 1e-15);
}

TEST(AdjointRhs, Examples) {
  const Vec2 x(0.3, -1.7);
  for (double mu : {-2.0, 0.0, 5.0}) {
    ExpectVecNear(adjoint_rhs(x, {0.4, -0.9}, mu, V()),
                  {2 * 0.3 * -0.9, 0}, 1e-15);
  }
  ExpectVecNear(adjoint_rhs({0, -2.5}, {0.4, -0.9}, 1.0, V()), {0, 0}, 0);
  ExpectVecNear(adjoint_rhs(x, {0, 1}, 0, W()), {2 * 0.3, 0}, 1e-15);
}

// With a nonzero multiplier the x2 column picks up mu * dv1/dx2.
TEST(AdjointRhs, MultiplierTerm) {
  const Vec2 x(0.3, -1.7);
  const Mat2 j = W().jacobian(x);
  const Vec2 psi(0.4, -0.9);
  const double mu = 0.25;
  const Vec2 want = -j.transpose() * psi + mu * j.row(0).transpose();
  ExpectVecNear(adjoint_rhs(x, psi, mu, W()), want, 1e-15);
}

TEST(JunctionResidual, Examples) {
  EXPECT_DOUBLE_EQ(junction_residual({0, -2}, {0, -1}, 0), 0.0);
  EXPECT_DOUBLE_EQ(junction_residual({1, 0}, {3, 0}, 1), 0.0);
  EXPECT_DOUBLE_EQ(junction_residual({1, 0}, {0, 1}, 0), std::sqrt(2.0));
}

TEST(JunctionResidual, InvariantUnderPositiveRescaling) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int i = 0; i < 500; ++i) {
    const Vec2 pb(g(rng), g(rng));
    const Vec2 pf(g(rng), g(rng));
    const double mu = g(rng);
    const double r = junction_residual(pb, pf, mu);
    for (double k : {1e-3, 2.0, 1e4}) {
      EXPECT_NEAR(junction_residual(k * pb, pf, mu), r, 1e-12);
      EXPECT_NEAR(junction_residual(pb, k * pf, k * mu), r, 1e-12);
    }
  }
}

TEST(JunctionResidual, DegenerateInputs) {
  EXPECT_THROW(junction_residual({0, 0}, {0, 1}, 0), DegenerateAdjoint);
  EXPECT_THROW(junction_residual({0, 1}, {1, 0}, 1), DegenerateAdjoint);
}

TEST(ToleranceSet, DefaultsAreValid) {
  const ToleranceSet tol;
  EXPECT_EQ(tol.theta_step, 0.01);
  EXPECT_EQ(tol.hit_tol, 1e-3);
  EXPECT_EQ(tol.mu_tol, 1e-3);
  EXPECT_EQ(tol.junction_tol, 1e-3);
  EXPECT_EQ(tol.rk_step, 1e-3);
  EXPECT_EQ(tol.t_max, 50.0);
  EXPECT_NO_THROW(tol.validate());
}

TEST(ToleranceSet, RejectsNonPositiveOrLooseValues) {
  auto with = [](auto edit) {
    ToleranceSet t;
    edit(t);
    return t;
  };
  EXPECT_THROW(with([](ToleranceSet& t) { t.theta_step = -0.01; }).validate(),
               InvalidProblem);
  EXPECT_THROW(with([](ToleranceSet& t) { t.rk_step = 0; }).validate(),
               InvalidProblem);
  EXPECT_THROW(with([](ToleranceSet& t) { t.t_max = NAN; }).validate(),
               InvalidProblem);
  EXPECT_THROW(with([](ToleranceSet& t) { t.hit_tol = 0.5; }).validate(),
               InvalidProblem);
}

TEST(ProblemSpec, Validation) {
  ProblemSpec spec;
  spec.b = Vec2(0, -6);
  EXPECT_NO_THROW(spec.validate());

  ProblemSpec outside = spec;
  outside.a = Vec2(1.2, 0);
  EXPECT_THROW(outside.validate(), InvalidProblem);

  ProblemSpec cross = spec;
  cross.flow = FlowField("cross", FlowParams{0, 0, 1.5, 0});
  EXPECT_THROW(cross.validate(), RegularityViolation);
}

TEST(ProblemSpec, Windows) {
  ProblemSpec spec;
  spec.a = Vec2(-0.6, 0);
  spec.b = Vec2(-0.5, -6);
  EXPECT_DOUBLE_EQ(spec.regularity_range().lo, -7.0);
  EXPECT_DOUBLE_EQ(spec.regularity_range().hi, 1.0);
  EXPECT_DOUBLE_EQ(spec.x2_window().lo, -6.001);
  EXPECT_DOUBLE_EQ(spec.x2_window().hi, 0.001);
}

}  // namespace
}  // namespace pmpnav
