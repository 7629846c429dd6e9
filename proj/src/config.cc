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

#include "pmpnav/config.h"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace pmpnav {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (std::string_view k : allowed) known = known || key == k;
    if (!known) throw ConfigError(where + ": unknown key \"" + key + "\"");
  }
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(field + ": must be finite");
  return d;
}

double positive(const json& v, const std::string& field) {
  const double d = number(v, field);
  if (!(d > 0.0)) throw ConfigError(field + ": must be positive");
  return d;
}

bool boolean(const json& v, const std::string& field) {
  if (!v.is_boolean()) throw ConfigError(field + ": expected true or false");
  return v.get<bool>();
}

Vec2 point(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2)
    throw ConfigError(field + ": expected [x1, x2]");
  return Vec2(number(v[0], field + "[0]"), number(v[1], field + "[1]"));
}

FlowField parse_flow(const json& v) {
  if (v.is_string()) {
    const std::string name = v.get<std::string>();
    if (auto f = FlowField::builtin(name)) return *f;
    throw ConfigError("flow: unknown built-in field \"" + name + "\"");
  }
  if (!v.is_object())
    throw ConfigError("flow: expected a field name or an object");
  reject_unknown(v, "flow", {"name", "a", "b", "c1", "c2"});
  std::string name = "custom";
  if (v.contains("name")) {
    if (!v["name"].is_string()) throw ConfigError("flow.name: expected a string");
    name = v["name"].get<std::string>();
  }
  FlowParams p;
  if (auto f = FlowField::builtin(name)) p = f->params();
  if (v.contains("a")) p.a = number(v["a"], "flow.a");
  if (v.contains("b")) p.b = number(v["b"], "flow.b");
  if (v.contains("c1")) p.c1 = number(v["c1"], "flow.c1");
  if (v.contains("c2")) p.c2 = number(v["c2"], "flow.c2");
  return FlowField(name, p);
}

json flow_json(const FlowField& f) {
  const FlowParams& p = f.params();
  return {{"name", f.name()}, {"a", p.a}, {"b", p.b}, {"c1", p.c1}, {"c2", p.c2}};
}

}  // namespace

ProblemSpec RunConfig::problem() const {
  ProblemSpec spec;
  spec.flow = flow;
  spec.a = a;
  spec.b = b;
  spec.half_width = half_width;
  spec.tol = tol;
  return spec;
}

RunConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: expected a JSON object");
  reject_unknown(root, "config",
                 {"flow", "A", "B", "half_width", "tolerances", "output",
                  "emit", "threads"});
  for (const char* key : {"flow", "A", "B"}) {
    if (!root.contains(key))
      throw ConfigError(std::string(key) + ": required field missing");
  }

  RunConfig c;
  c.flow = parse_flow(root["flow"]);
  c.a = point(root["A"], "A");
  c.b = point(root["B"], "B");
  if (root.contains("half_width"))
    c.half_width = positive(root["half_width"], "half_width");

  if (root.contains("tolerances")) {
    const json& t = root["tolerances"];
    if (!t.is_object()) throw ConfigError("tolerances: expected an object");
    reject_unknown(t, "tolerances",
                   {"theta_step", "hit_tol", "mu_tol", "junction_tol",
                    "rk_step", "t_max"});
    auto read = [&](const char* key, double& field) {
      if (t.contains(key))
        field = positive(t[key], std::string("tolerances.") + key);
    };
    read("theta_step", c.tol.theta_step);
    read("hit_tol", c.tol.hit_tol);
    read("mu_tol", c.tol.mu_tol);
    read("junction_tol", c.tol.junction_tol);
    read("rk_step", c.tol.rk_step);
    read("t_max", c.tol.t_max);
  }

  if (root.contains("output")) {
    if (!root["output"].is_string())
      throw ConfigError("output: expected a directory path");
    c.output_dir = root["output"].get<std::string>();
  }
  if (root.contains("emit")) {
    const json& e = root["emit"];
    if (!e.is_object()) throw ConfigError("emit: expected an object");
    reject_unknown(e, "emit", {"summary", "trajectories", "sweep"});
    if (e.contains("summary")) c.emit.summary = boolean(e["summary"], "emit.summary");
    if (e.contains("trajectories"))
      c.emit.trajectories = boolean(e["trajectories"], "emit.trajectories");
    if (e.contains("sweep")) c.emit.sweep = boolean(e["sweep"], "emit.sweep");
  }
  if (root.contains("threads")) {
    const json& th = root["threads"];
    if (!th.is_number_integer() || th.get<long long>() < 1)
      throw ConfigError("threads: expected a positive integer");
    c.threads = th.get<unsigned>();
  }

  try {
    c.tol.validate();
  } catch (const InvalidProblem& e) {
    throw ConfigError(std::string("tolerances: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
  json root = {
      {"flow", flow_json(c.flow)},
      {"A", {c.a.x(), c.a.y()}},
      {"B", {c.b.x(), c.b.y()}},
      {"half_width", c.half_width},
      {"tolerances",
       {{"theta_step", c.tol.theta_step},
        {"hit_tol", c.tol.hit_tol},
        {"mu_tol", c.tol.mu_tol},
        {"junction_tol", c.tol.junction_tol},
        {"rk_step", c.tol.rk_step},
        {"t_max", c.tol.t_max}}},
      {"output", c.output_dir},
      {"emit",
       {{"summary", c.emit.summary},
        {"trajectories", c.emit.trajectories},
        {"sweep", c.emit.sweep}}},
      {"threads", c.threads},
  };
  return root.dump(2);
}

}  // namespace pmpnav
