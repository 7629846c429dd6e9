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

// pmpnav solve --config <path> [--out <dir>] [--theta-step <v>]
//              [--rk-step <v>] [--emit-sweep]

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pmpnav/config.h"
#include "pmpnav/io.h"

int main(int argc, char** argv) {
  CLI::App app{"Time-optimal corridor navigation in a steady flow"};
  app.require_subcommand(1);

  CLI::App* solve = app.add_subcommand("solve", "compute the field of extremals");
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<double> theta_step;
  std::optional<double> rk_step;
  bool emit_sweep = false;
  solve->add_option("--config", config_path, "JSON run configuration")
      ->required();
  solve->add_option("--out", out_dir, "output directory (overrides config)");
  solve->add_option("--theta-step", theta_step, "shooting-angle grid spacing");
  solve->add_option("--rk-step", rk_step, "Runge-Kutta step");
  solve->add_flag("--emit-sweep", emit_sweep, "also write sweep.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pmpnav::kExitConfigError;
  }

  pmpnav::RunConfig config;
  try {
    config = pmpnav::load_config(config_path);
    if (out_dir) config.output_dir = *out_dir;
    if (theta_step) config.tol.theta_step = *theta_step;
    if (rk_step) config.tol.rk_step = *rk_step;
    if (emit_sweep) config.emit.sweep = true;
    config.tol.validate();
  } catch (const pmpnav::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return pmpnav::kExitConfigError;
  } catch (const pmpnav::InvalidProblem& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return pmpnav::kExitConfigError;
  }
  return pmpnav::run(config, std::cerr);
}
