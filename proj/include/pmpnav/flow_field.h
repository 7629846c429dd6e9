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

#ifndef PMPNAV_FLOW_FIELD_H_
#define PMPNAV_FLOW_FIELD_H_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pmpnav {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Coefficients of the steady shear family
//
//   v1(x) = c1 + a * sin(pi * x2)
//   v2(x) = c2 - b * x1^2
//
// Both built-in fields belong to it: V is (a=0, b=1) and W is (a=0.5, b=1).
// The constant offsets exist so that uniform cross-flows can be expressed.
struct FlowParams {
  double a = 0.0;
  double b = 1.0;
  double c1 = 0.0;
  double c2 = 0.0;

  bool operator==(const FlowParams&) const = default;
};

// Immutable planar velocity field with an analytic Jacobian. Velocities are
// measured in units of the vehicle's maximum control speed.
class FlowField {
 public:
  // The default-constructed field is V.
  FlowField() : FlowField("V", FlowParams{}) {}
  FlowField(std::string name, FlowParams params);

  // Registry lookup for the built-in fields ("V", "W"). Returns nullopt for
  // any other name.
  static std::optional<FlowField> builtin(const std::string& name);
  static std::vector<std::string> builtin_names();

  const std::string& name() const { return name_; }
  const FlowParams& params() const { return params_; }

  Vec2 eval(const Vec2& x) const;

  // J(i, j) = d v_i / d x_j.
  Mat2 jacobian(const Vec2& x) const;

  bool operator==(const FlowField&) const = default;

 private:
  std::string name_;
  FlowParams params_;
};

inline Vec2 eval_field(const FlowField& f, const Vec2& x) { return f.eval(x); }
inline Mat2 eval_jacobian(const FlowField& f, const Vec2& x) {
  return f.jacobian(x);
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct RegularityReport {
  bool ok = false;
  // 1 - max |v1| over the sampled boundary points.
  double worst_margin = 0.0;
  // Where the maximum was attained.
  double worst_x2 = 0.0;
  int worst_side = 1;
};

// Sufficient condition for the state constraint to be regular with the unit
// disk as control set: |v1| < 1 on both walls x1 = +-half_width. Checked at
// `samples` evenly spaced points of `range` on each wall.
//
// Throws std::invalid_argument if samples < 2 or half_width <= 0.
RegularityReport check_regularity(const FlowField& f, double half_width,
                                  int samples, Interval range);

}  // namespace pmpnav

#endif  // PMPNAV_FLOW_FIELD_H_
