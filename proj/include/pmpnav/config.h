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

#ifndef PMPNAV_CONFIG_H_
#define PMPNAV_CONFIG_H_

#include <stdexcept>
#include <string>
#include <string_view>

#include "pmpnav/pmp_core.h"

namespace pmpnav {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EmitFlags {
  bool summary = true;
  bool trajectories = true;
  bool sweep = false;

  bool operator==(const EmitFlags&) const = default;
};

// JSON run configuration:
//
//   {
//     "flow": "V" | "W" | {"name": s, "a": x, "b": x, "c1": x, "c2": x},
//     "A": [a1, a2],
//     "B": [b1, b2],
//     "half_width": 1.0,
//     "tolerances": {"theta_step": 0.01, "hit_tol": 1e-3, "mu_tol": 1e-3,
//                    "junction_tol": 1e-3, "rk_step": 1e-3, "t_max": 50},
//     "output": "out",
//     "emit": {"summary": true, "trajectories": true, "sweep": false},
//     "threads": 1
//   }
//
// Only "flow", "A" and "B" are required. Unknown keys are rejected at every
// level. In an object-valued flow the coefficients default to those of the
// named built-in, or to (a, b, c1, c2) = (0, 1, 0, 0) for other names.
struct RunConfig {
  FlowField flow;
  Vec2 a = Vec2::Zero();
  Vec2 b = Vec2::Zero();
  double half_width = 1.0;
  ToleranceSet tol;
  std::string output_dir = "out";
  EmitFlags emit;
  unsigned threads = 1;

  ProblemSpec problem() const;

  bool operator==(const RunConfig&) const = default;
};

// Throws ConfigError naming the offending field (or the parse position for
// malformed JSON). Does not check regularity; that belongs to the solver.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::string& path);

std::string serialize_config(const RunConfig& config);

}  // namespace pmpnav

#endif  // PMPNAV_CONFIG_H_
