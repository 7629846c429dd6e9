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

#include "pmpnav/io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pmpnav {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vec_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void check_written(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

double hamiltonian_drift(const Extremal& e, const FlowField& flow) {
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const Trajectory& arc : e.arcs) {
    for (const PhasePoint& p : arc.points) {
      const double h = hamiltonian(p.x, p.u, p.psi, p.mu, flow);
      lo = std::min(lo, h);
      hi = std::max(hi, h);
    }
  }
  return hi - lo;
}

std::string format_row(const CsvRow& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s", r.t,
                r.x.x(), r.x.y(), r.psi.x(), r.psi.y(), r.mu, r.u.x(), r.u.y(),
                r.arc.c_str());
  return buf;
}

constexpr const char* kCsvHeader = "t,x1,x2,psi1,psi2,mu,u1,u2,arc";

}  // namespace

std::string arc_label(const Trajectory& arc) {
  if (arc.arc == ArcType::kBoundary) return "boundary";
  return arc.direction == Direction::kForward ? "inner_fwd" : "inner_bwd";
}

std::vector<CsvRow> extremal_rows(const Extremal& e) {
  std::vector<CsvRow> rows;
  for (const Trajectory& arc : e.arcs) {
    const std::string label = arc_label(arc);
    for (const PhasePoint& p : arc.points) {
      if (!rows.empty() && !(p.t > rows.back().t)) continue;
      rows.push_back({p.t, p.x, p.psi, p.mu, p.u, label});
    }
  }
  return rows;
}

void write_extremal_csv(const fs::path& path, const Extremal& e) {
  std::ofstream out = open_for_write(path);
  out << kCsvHeader << '\n';
  for (const CsvRow& r : extremal_rows(e)) out << format_row(r) << '\n';
  check_written(out, path);
}

std::vector<CsvRow> read_extremal_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw IoError(path.string() + ": unexpected header");
  std::vector<CsvRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    double v[8];
    for (double& value : v) {
      if (!std::getline(ss, cell, ','))
        throw IoError(path.string() + ":" + std::to_string(lineno) +
                      ": too few columns");
      try {
        value = std::stod(cell);
      } catch (const std::exception&) {
        throw IoError(path.string() + ":" + std::to_string(lineno) +
                      ": bad number \"" + cell + "\"");
      }
    }
    CsvRow r;
    r.t = v[0];
    r.x = Vec2(v[1], v[2]);
    r.psi = Vec2(v[3], v[4]);
    r.mu = v[5];
    r.u = Vec2(v[6], v[7]);
    if (!std::getline(ss, r.arc))
      throw IoError(path.string() + ":" + std::to_string(lineno) +
                    ": missing arc label");
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_sweep_csv(const fs::path& path,
                     const std::vector<SweepSample>& samples) {
  std::ofstream out = open_for_write(path);
  out << "theta,phase,kind,score,side,termination\n";
  char buf[256];
  for (const SweepSample& s : samples) {
    const std::string phase(to_string(s.phase));
    const std::string term(to_string(s.termination));
    if (s.phase == Direction::kBackward) {
      std::snprintf(buf, sizeof(buf), "%.17g,%s,inner,%.17g,%d,%s\n", s.theta,
                    phase.c_str(), s.distance, s.side, term.c_str());
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g,%s,junction,%.17g,%d,%s\n", s.theta,
                  phase.c_str(), s.contact_mu, s.side, term.c_str());
    out << buf;
  }
  check_written(out, path);
}

std::string summary_json(const ProblemSpec& spec,
                         const RegularityReport& regularity,
                         const ExtremalField* field,
                         const Diagnostics& diagnostics) {
  const FlowParams& fp = spec.flow.params();
  json root;
  root["problem"] = {
      {"flow",
       {{"name", spec.flow.name()},
        {"a", fp.a},
        {"b", fp.b},
        {"c1", fp.c1},
        {"c2", fp.c2}}},
      {"A", vec_json(spec.a)},
      {"B", vec_json(spec.b)},
      {"half_width", spec.half_width},
      {"tolerances",
       {{"theta_step", spec.tol.theta_step},
        {"hit_tol", spec.tol.hit_tol},
        {"mu_tol", spec.tol.mu_tol},
        {"junction_tol", spec.tol.junction_tol},
        {"rk_step", spec.tol.rk_step},
        {"t_max", spec.tol.t_max}}},
  };
  root["regularity"] = {{"ok", regularity.ok},
                        {"worst_margin", regularity.worst_margin},
                        {"worst_x2", regularity.worst_x2},
                        {"worst_side", regularity.worst_side}};

  json extremals = json::array();
  if (field) {
    for (std::size_t k = 0; k < field->extremals.size(); ++k) {
      const Extremal& e = field->extremals[k];
      double backtrack = 0.0;
      for (const Trajectory& arc : e.arcs)
        backtrack = std::max(backtrack, multiplier_backtrack(arc));
      json item = {
          {"index", k},
          {"kind", std::string(to_string(e.kind))},
          {"T", e.T},
          {"lambda", e.lambda},
          {"theta_f", e.theta_f ? json(*e.theta_f) : json(nullptr)},
          {"theta_b", e.theta_b ? json(*e.theta_b) : json(nullptr)},
          {"file", "extremal_" + std::to_string(k) + ".csv"},
          {"hamiltonian_drift", hamiltonian_drift(e, spec.flow)},
          {"mu_backtrack", backtrack},
      };
      if (e.junction) {
        const JunctionData& j = *e.junction;
        item["junction"] = {
            {"side", j.side},
            {"entry", {{"t", j.entry_t}, {"x", vec_json(j.entry_x)}, {"mu", j.entry_mu}}},
            {"exit", {{"t", j.exit_t}, {"x", vec_json(j.exit_x)}, {"mu", j.exit_mu}}},
            {"residual", j.residual},
            {"adjoint_scale", j.adjoint_scale},
        };
      } else {
        item["junction"] = nullptr;
      }
      extremals.push_back(std::move(item));
    }
  }
  root["extremals"] = std::move(extremals);
  if (field && !field->extremals.empty()) {
    root["optimal_index"] = field->optimal_index;
    root["optimal_T"] = field->optimal().T;
  } else {
    root["optimal_index"] = nullptr;
    root["optimal_T"] = nullptr;
  }

  json touches = json::array();
  for (const TouchRecord& t : diagnostics.touches) {
    touches.push_back({{"phase", std::string(to_string(t.phase))},
                       {"theta", t.theta},
                       {"side", t.side},
                       {"contact", vec_json(t.contact)},
                       {"mu", t.mu},
                       {"matched", t.matched}});
  }
  json attempts = json::array();
  for (const MatchAttempt& a : diagnostics.attempts) {
    attempts.push_back({{"side", a.side},
                        {"theta_f", a.theta_f},
                        {"theta_b", a.theta_b},
                        {"outcome", std::string(to_string(a.outcome))},
                        {"boundary_stop", std::string(to_string(a.boundary_stop))},
                        {"residual", finite_or_null(a.residual)},
                        {"detail", a.detail}});
  }
  root["diagnostics"] = {
      {"angles_swept", diagnostics.angles_swept},
      {"bisection_iterations", diagnostics.bisection_iterations},
      {"rejected_minima", diagnostics.rejected_minima},
      {"rejected_extremals", diagnostics.rejected_extremals},
      {"rejection_notes", diagnostics.rejection_notes},
      {"touches", std::move(touches)},
      {"match_attempts", std::move(attempts)},
  };
  return root.dump(2);
}

int run(const RunConfig& config, std::ostream& log) {
  const ProblemSpec spec = config.problem();
  try {
    spec.validate();
  } catch (const RegularityViolation& e) {
    log << "regularity violation: " << e.what() << '\n';
    return kExitRegularityViolation;
  } catch (const InvalidProblem& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  const RegularityReport regularity =
      check_regularity(spec.flow, spec.half_width, 1000, spec.regularity_range());

  const fs::path out_dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    log << "cannot create " << out_dir << ": " << ec.message() << '\n';
    return kExitIoError;
  }

  int status = kExitOk;
  std::optional<ExtremalField> field;
  Diagnostics diagnostics;
  try {
    field = solve(spec, SweepOptions{config.threads});
    diagnostics = field->diagnostics;
  } catch (const NoExtremalFound& e) {
    log << "no extremal found: " << e.what() << '\n';
    diagnostics = e.diagnostics;
    status = kExitNoExtremal;
  }

  try {
    if (config.emit.summary) {
      const fs::path path = out_dir / "summary.json";
      std::ofstream out = open_for_write(path);
      out << summary_json(spec, regularity, field ? &*field : nullptr, diagnostics)
          << '\n';
      check_written(out, path);
    }
    if (config.emit.trajectories && field) {
      for (std::size_t k = 0; k < field->extremals.size(); ++k) {
        write_extremal_csv(out_dir / ("extremal_" + std::to_string(k) + ".csv"),
                           field->extremals[k]);
      }
    }
    if (config.emit.sweep) {
      write_sweep_csv(out_dir / "sweep.csv", diagnostics.samples);
    }
  } catch (const IoError& e) {
    log << "i/o error: " << e.what() << '\n';
    return kExitIoError;
  }

  if (field) {
    log << field->count(ExtremalKind::kInner) << " inner + "
        << field->count(ExtremalKind::kBoundary) << " boundary extremals\n";
    for (std::size_t k = 0; k < field->extremals.size(); ++k) {
      const Extremal& e = field->extremals[k];
      log << "  [" << k << "] " << to_string(e.kind) << " T = " << e.T
          << (k == field->optimal_index ? "  (optimal)" : "") << '\n';
    }
  }
  return status;
}

}  // namespace pmpnav
