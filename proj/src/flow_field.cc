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

#include "pmpnav/flow_field.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace pmpnav {

FlowField::FlowField(std::string name, FlowParams params)
    : name_(std::move(name)), params_(params) {}

std::optional<FlowField> FlowField::builtin(const std::string& name) {
  if (name == "V") return FlowField("V", FlowParams{.a = 0.0, .b = 1.0});
  if (name == "W") return FlowField("W", FlowParams{.a = 0.5, .b = 1.0});
  return std::nullopt;
}

std::vector<std::string> FlowField::builtin_names() { return {"V", "W"}; }

Vec2 FlowField::eval(const Vec2& x) const {
  const double pi = std::numbers::pi;
  return Vec2(params_.c1 + params_.a * std::sin(pi * x.y()),
              params_.c2 - params_.b * x.x() * x.x());
}

Mat2 FlowField::jacobian(const Vec2& x) const {
  const double pi = std::numbers::pi;
  Mat2 j;
  j << 0.0, params_.a * pi * std::cos(pi * x.y()),
      -2.0 * params_.b * x.x(), 0.0;
  return j;
}

RegularityReport check_regularity(const FlowField& f, double half_width,
                                  int samples, Interval range) {
  if (samples < 2) throw std::invalid_argument("regularity: samples < 2");
  if (!(half_width > 0.0))
    throw std::invalid_argument("regularity: half_width must be positive");

  RegularityReport report;
  double worst = -1.0;
  for (int side : {1, -1}) {
    for (int k = 0; k < samples; ++k) {
      const double x2 =
          range.lo + (range.hi - range.lo) * k / static_cast<double>(samples - 1);
      const double v1 = std::abs(f.eval(Vec2(side * half_width, x2)).x());
      if (v1 > worst) {
        worst = v1;
        report.worst_x2 = x2;
        report.worst_side = side;
      }
    }
  }
  report.worst_margin = 1.0 - worst;
  report.ok = worst < 1.0;
  return report;
}

}  // namespace pmpnav
