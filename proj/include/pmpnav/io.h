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

#ifndef PMPNAV_IO_H_
#define PMPNAV_IO_H_

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "pmpnav/config.h"
#include "pmpnav/shooting.h"

namespace pmpnav {

// Process exit codes of `pmpnav solve`.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitRegularityViolation = 3,
  kExitNoExtremal = 4,
  kExitIoError = 5,
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One row of extremal_<k>.csv.
struct CsvRow {
  double t = 0.0;
  Vec2 x = Vec2::Zero();
  Vec2 psi = Vec2::Zero();
  double mu = 0.0;
  Vec2 u = Vec2::Zero();
  std::string arc;  // inner_fwd | boundary | inner_bwd
};

std::string arc_label(const Trajectory& arc);

// Rows of an extremal in global forward time. Points that do not advance
// the time (the shared point at an arc junction) are dropped, so t is
// strictly increasing.
std::vector<CsvRow> extremal_rows(const Extremal& e);

void write_extremal_csv(const std::filesystem::path& path, const Extremal& e);
std::vector<CsvRow> read_extremal_csv(const std::filesystem::path& path);

void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepSample>& samples);

// summary.json content. `field` may be null when no extremal was found.
std::string summary_json(const ProblemSpec& spec,
                         const RegularityReport& regularity,
                         const ExtremalField* field,
                         const Diagnostics& diagnostics);

// Validates, solves and writes the requested outputs. Progress and errors
// go to `log`. Returns one of ExitCode.
int run(const RunConfig& config, std::ostream& log);

}  // namespace pmpnav

#endif  // PMPNAV_IO_H_
