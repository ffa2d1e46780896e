// Copyright 2026 The AWES-OCP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "awes/config.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <string>
#include <type_traits>
#include <utility>

#include "awes/errors.hpp"

namespace awes {

using nlohmann::json;

std::string_view tether_mode_name(TetherMode mode) { return mode == TetherMode::kRigid ? "rigid" : "flexible"; }

TetherMode parse_tether_mode(std::string_view name) {
  if (name == "flexible") return TetherMode::kFlexible;
  if (name == "rigid") return TetherMode::kRigid;
  throw Error(ErrorCode::kConfigError, "tether mode must be flexible or rigid, got '" + std::string(name) + "'");
}

std::string_view path_shape_name(PathShape shape) {
  return shape == PathShape::kLemniscate ? "lemniscate" : "circle";
}

PathShape parse_path_shape(std::string_view name) {
  if (name == "circle") return PathShape::kCircle;
  if (name == "lemniscate") return PathShape::kLemniscate;
  throw Error(ErrorCode::kConfigError, "path shape must be circle or lemniscate, got '" + std::string(name) + "'");
}

PathSpec ExperimentConfig::resolved_path() const {
  PathSpec p = path;
  p.duration = horizon;
  p.loops = p.shape == PathShape::kCircle ? circle_loops : lemniscate_loops;
  return p;
}

VariableBounds ExperimentConfig::resolved_variable_bounds() const {
  const PathSpec p = resolved_path();
  return make_variable_bounds(variable_bounds, p.shape, p.loops);
}

namespace {

constexpr double kDeg = kPi / 180.0;

// Reads one JSON object; every key must be consumed.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_, "expected an object");
  }

  template <typename T>
  void value(const char* key, T& out) {
    if (const json* j = take(key)) out = convert<T>(*j, where(key));
  }
  void interval(const char* key, Interval& out, double unit = 1.0) {
    if (const json* j = take(key)) {
      const auto v = array<2>(*j, where(key));
      out = {v[0] * unit, v[1] * unit};
    }
  }
  void vec3(const char* key, Vec3<double>& out) {
    if (const json* j = take(key)) {
      const auto v = array<3>(*j, where(key));
      out = Vec3<double>(v[0], v[1], v[2]);
    }
  }
  void polynomial(const char* key, AeroPolynomial& out) {
    if (const json* j = take(key)) {
      const auto v = array<3>(*j, where(key));
      out = {v[0], v[1], v[2]};
    }
  }
  void mat3(const char* key, Mat3<double>& out) {
    if (const json* j = take(key)) {
      if (!j->is_array() || j->size() != 3) fail(where(key), "expected a 3x3 array");
      for (int r = 0; r < 3; ++r) {
        const auto row = array<3>((*j)[r], where(key));
        for (int c = 0; c < 3; ++c) out(r, c) = row[c];
      }
    }
  }
  template <int N>
  void vector(const char* key, Eigen::Matrix<double, N, 1>& out) {
    if (const json* j = take(key)) {
      const auto v = array<N>(*j, where(key));
      for (int i = 0; i < N; ++i) out(i) = v[i];
    }
  }
  template <typename E, typename Parse>
  void choice(const char* key, E& out, Parse parse) {
    if (const json* j = take(key)) {
      const std::string s = convert<std::string>(*j, where(key));
      try {
        out = parse(s);
      } catch (const Error& e) {
        fail(where(key), e.what());
      }
    }
  }
  template <typename F>
  void object(const char* key, F body) {
    if (const json* j = take(key)) {
      Reader child(*j, where(key));
      body(child);
      child.finish();
    }
  }
  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) fail(where(it.key().c_str()), "unknown key");
    }
  }

 private:
  [[noreturn]] static void fail(const std::string& path, const std::string& msg) {
    throw Error(ErrorCode::kConfigError, path + ": " + msg);
  }
  std::string where(const char* key) const { return path_.empty() ? key : path_ + "." + key; }
  const json* take(const char* key) {
    seen_.insert(key);
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }
  template <typename T>
  static T convert(const json& j, const std::string& path) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!j.is_boolean()) fail(path, "expected a boolean");
    } else if constexpr (std::is_same_v<T, int>) {
      if (!j.is_number_integer()) fail(path, "expected an integer");
    } else if constexpr (std::is_same_v<T, double>) {
      if (!j.is_number()) fail(path, "expected a number");
    } else {
      if (!j.is_string()) fail(path, "expected a string");
    }
    return j.get<T>();
  }
  template <int N>
  static std::array<double, N> array(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != N) fail(path, "expected an array of " + std::to_string(N) + " numbers");
    std::array<double, N> out{};
    for (int i = 0; i < N; ++i) out[i] = convert<double>(j[i], path);
    return out;
  }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

// Mirror of Reader that emits JSON.
class Writer {
 public:
  explicit Writer(json& node) : node_(node) { node_ = json::object(); }

  template <typename T>
  void value(const char* key, T& v) {
    node_[key] = v;
  }
  void interval(const char* key, Interval& v, double unit = 1.0) {
    node_[key] = {in_unit(v.lower, unit), in_unit(v.upper, unit)};
  }
  void vec3(const char* key, Vec3<double>& v) { node_[key] = {v(0), v(1), v(2)}; }
  void polynomial(const char* key, AeroPolynomial& p) { node_[key] = {p.c2, p.c1, p.c0}; }
  void mat3(const char* key, Mat3<double>& m) {
    json rows = json::array();
    for (int r = 0; r < 3; ++r) rows.push_back({m(r, 0), m(r, 1), m(r, 2)});
    node_[key] = rows;
  }
  template <int N>
  void vector(const char* key, Eigen::Matrix<double, N, 1>& v) {
    json a = json::array();
    for (int i = 0; i < N; ++i) a.push_back(v(i));
    node_[key] = a;
  }
  template <typename E, typename Parse>
  void choice(const char* key, E& v, Parse) {
    node_[key] = name_of(v);
  }
  template <typename F>
  void object(const char* key, F body) {
    Writer child(node_[key]);
    body(child);
  }

 private:
  // Conversions back to degrees are rounded to 12 significant digits so
  // tabulated values read back exactly.
  static double in_unit(double v, double unit) {
    if (unit == 1.0) return v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v / unit);
    return std::strtod(buf, nullptr);
  }
  static std::string name_of(TetherMode m) { return std::string(tether_mode_name(m)); }
  static std::string name_of(PathShape s) { return std::string(path_shape_name(s)); }
  json& node_;
};

template <typename V>
void visit_surface(V& v, SurfaceCoefficients& s, bool with_moment) {
  v.polynomial("lift", s.lift);
  v.polynomial("drag", s.drag);
  if (with_moment) v.polynomial("moment", s.moment);
}

template <typename V>
void visit(V& v, ExperimentConfig& c) {
  v.value("name", c.name);
  v.choice("tether_mode", c.params.tether_mode, parse_tether_mode);
  v.object("mesh", [&](auto& m) {
    m.value("intervals", c.intervals);
    m.value("horizon", c.horizon);
  });
  v.object("path", [&](auto& p) {
    p.choice("shape", c.path.shape, parse_path_shape);
    p.vec3("center", c.path.center);
    p.value("radius", c.path.radius);
    p.value("phase", c.path.phase);
    p.value("elevation", c.path.elevation);
    p.value("direction", c.path.direction);
    p.object("circle", [&](auto& o) { o.value("loops", c.circle_loops); });
    p.object("lemniscate", [&](auto& o) {
      o.value("loops", c.lemniscate_loops);
      o.value("width", c.path.width);
      o.value("height", c.path.height);
    });
  });
  v.object("model", [&](auto& m) {
    AircraftParams& a = c.params.aircraft;
    m.object("aircraft", [&](auto& o) {
      o.value("mass", a.mass);
      o.mat3("inertia", a.inertia);
      o.value("wing_span", a.wing_span);
      o.value("wing_area", a.wing_area);
      o.value("wing_chord", a.wing_chord);
      o.value("elevator_area", a.elevator_area);
      o.value("rudder_area", a.rudder_area);
      o.vec3("elevator_position", a.elevator_position);
      o.vec3("rudder_position", a.rudder_position);
      o.object("wing", [&](auto& s) { visit_surface(s, a.wing, true); });
      o.object("elevator", [&](auto& s) { visit_surface(s, a.elevator, false); });
      o.object("rudder", [&](auto& s) { visit_surface(s, a.rudder, false); });
      o.value("aileron_roll_coefficient", a.aileron_roll_coefficient);
      o.value("elevator_damping_lever", a.elevator_damping_lever);
      o.value("rudder_damping_lever", a.rudder_damping_lever);
      o.value("aileron_damping_lever", a.aileron_damping_lever);
    });
    m.object("winch", [&](auto& o) {
      o.value("inertia", c.params.winch.inertia);
      o.value("friction", c.params.winch.friction);
      o.value("radius", c.params.winch.radius);
    });
    m.object("tether", [&](auto& o) {
      TetherParams& t = c.params.tether;
      o.value("masses", t.masses);
      o.value("density", t.density);
      o.value("diameter", t.diameter);
      o.value("youngs_modulus", t.youngs_modulus);
      o.value("area", t.area);
      o.value("drag_coefficient", t.drag_coefficient);
      o.value("drag_refinements", t.drag_refinements);
    });
    m.object("environment", [&](auto& o) {
      Environment& e = c.params.env;
      o.object("wind", [&](auto& w) {
        w.value("v_ground", e.wind.v_ground);
        w.value("z_ref", e.wind.z_ref);
        w.value("z0", e.wind.z0);
        w.value("zeta", e.wind.zeta);
      });
      o.object("atmosphere", [&](auto& w) {
        w.value("rho0", e.atmosphere.rho0);
        w.value("scale_height", e.atmosphere.scale_height);
      });
      o.value("gravity", e.gravity);
    });
  });
  v.object("bounds", [&](auto& b) {
    b.object("path", [&](auto& o) {
      PathBounds& p = c.path_bounds;
      o.interval("tether_force", p.tether_force);
      o.interval("lateral_position", p.lateral_position);
      o.interval("altitude", p.altitude);
      o.interval("winch_acceleration", p.winch_acceleration);
      o.interval("airspeed", p.airspeed);
      o.interval("angle_of_attack_deg", p.angle_of_attack, kDeg);
      o.interval("sideslip_deg", p.sideslip, kDeg);
      o.interval("elevator_angle_deg", p.elevator_angle, kDeg);
      o.interval("rudder_angle_deg", p.rudder_angle, kDeg);
      o.interval("aileron_angle_deg", p.aileron_angle, kDeg);
      o.interval("tether_angle_deg", p.tether_angle, kDeg);
      o.value("reel_out_enabled", p.reel_out_enabled);
      o.value("reel_out_fraction", p.reel_out_fraction);
    });
    b.object("variables", [&](auto& o) {
      VariableBoundsTable& t = c.variable_bounds;
      o.interval("velocity_x", t.velocity_x);
      o.interval("velocity_y", t.velocity_y);
      o.interval("velocity_z", t.velocity_z);
      o.interval("angular_velocity_deg_s", t.angular_velocity, kDeg);
      o.interval("roll", t.roll);
      o.interval("pitch", t.pitch);
      o.value("yaw_circle_min_per_loop", t.yaw_circle_min_per_loop);
      o.value("yaw_circle_min_offset", t.yaw_circle_min_offset);
      o.value("yaw_circle_max", t.yaw_circle_max);
      o.interval("yaw_lemniscate", t.yaw_lemniscate);
      o.interval("longitude", t.longitude);
      o.interval("latitude", t.latitude);
      o.interval("distance", t.distance);
      o.interval("generator_torque", t.generator_torque);
      o.interval("aileron", t.aileron);
      o.interval("elevator", t.elevator);
      o.interval("rudder", t.rudder);
      o.interval("winch_segment_polar", t.winch_segment_polar);
      o.interval("winch_segment_lateral", t.winch_segment_lateral);
      o.interval("tension", t.tension);
    });
  });
  v.object("cost", [&](auto& o) {
    o.value("power_reference", c.cost.power_reference);
    o.vec3("angular_acceleration_weights", c.cost.weights.angular_acceleration);
    o.value("sideslip_weight", c.cost.weights.sideslip);
    o.vector("tracking_weights", c.cost.weights.tracking);
    o.value("fictitious_regularization", c.cost.fictitious_regularization);
  });
  v.object("guess", [&](auto& o) { o.value("initial_tension", c.guess.initial_tension); });
  v.object("homotopy", [&](auto& o) {
    o.value("tau_initial", c.homotopy.tau_initial);
    o.value("tau_intermediate", c.homotopy.tau_intermediate);
    o.value("tau_final", c.homotopy.tau_final);
    o.vec3("penalty", c.homotopy.penalty);
    o.value("fix_released_inputs", c.homotopy.fix_released_inputs);
  });
  v.object("solver", [&](auto& o) {
    nlp::SolverOptions& s = c.solver;
    o.value("max_iterations", s.max_iterations);
    o.value("kkt_tolerance", s.kkt_tolerance);
    o.value("feasibility_tolerance", s.feasibility_tolerance);
    o.value("barrier_reduction", s.barrier_reduction);
    o.value("barrier_progress", s.barrier_progress);
    o.value("bound_push", s.bound_push);
    o.value("warm_bound_push", s.warm_bound_push);
    o.value("constraint_regularization", s.constraint_regularization);
    o.value("max_restoration_iterations", s.max_restoration_iterations);
  });
  v.object("output", [&](auto& o) { o.value("directory", c.output.directory); });
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kConfigError, what);
}

void require_interval(const Interval& iv, const std::string& name) {
  require(!(iv.lower > iv.upper), name + ": lower bound exceeds upper bound");
}

}  // namespace

ExperimentConfig parse_config(const json& document) {
  Reader root(document, "");
  int version = -1;
  root.value("schema_version", version);
  if (version != kConfigSchemaVersion) {
    throw Error(ErrorCode::kConfigError, "schema_version must be " + std::to_string(kConfigSchemaVersion));
  }
  ExperimentConfig c;
  visit(root, c);
  root.finish();
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot open config " + file.string());
  json document;
  try {
    in >> document;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, file.string() + ": " + e.what());
  }
  return parse_config(document);
}

json to_json(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  json out;
  Writer w(out);
  visit(w, c);
  json doc = {{"schema_version", kConfigSchemaVersion}};
  doc.update(out);
  return doc;
}

void validate(const ExperimentConfig& c) {
  require(c.intervals >= 1, "mesh.intervals must be at least 1");
  require(c.horizon > 0.0, "mesh.horizon must be positive");
  require(c.circle_loops >= 1 && c.lemniscate_loops >= 1, "path loops must be at least 1");
  try {
    validate(c.resolved_path());
    validate(c.homotopy);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, e.what());
  }
  const AircraftParams& a = c.params.aircraft;
  require(a.mass > 0.0 && a.wing_area > 0.0 && a.wing_span > 0.0 && a.wing_chord > 0.0,
          "aircraft mass and wing geometry must be positive");
  require(a.inertia.determinant() > 0.0, "aircraft inertia must be positive definite");
  require(c.params.winch.inertia > 0.0 && c.params.winch.radius > 0.0, "winch inertia and radius must be positive");
  const TetherParams& t = c.params.tether;
  require(t.masses >= 1, "tether.masses must be at least 1");
  require(t.density > 0.0 && t.diameter > 0.0 && t.youngs_modulus > 0.0 && t.area > 0.0,
          "tether properties must be positive");
  require(t.drag_refinements >= 0, "tether.drag_refinements must be non-negative");
  require(c.params.env.wind.z0 > 0.0 && c.params.env.wind.z_ref > c.params.env.wind.z0,
          "wind needs 0 < z0 < z_ref");
  require(c.params.env.atmosphere.rho0 > 0.0 && c.params.env.atmosphere.scale_height > 0.0,
          "atmosphere parameters must be positive");
  require(c.guess.initial_tension > 0.0, "guess.initial_tension must be positive");
  require(c.cost.power_reference > 0.0, "cost.power_reference must be positive");
  require(c.cost.fictitious_regularization >= 0.0, "cost.fictitious_regularization must be non-negative");
  require(c.path_bounds.reel_out_fraction >= 0.0 && c.path_bounds.reel_out_fraction <= 1.0,
          "reel_out_fraction must lie in [0, 1]");
  for (int i = 0; i < kNumPathConstraints; ++i) require_interval(c.path_bounds.row(i), "path bound row " + std::to_string(i));
  const VariableBounds vb = c.resolved_variable_bounds();
  for (int i = 0; i < kNumStates; ++i) require_interval({vb.state_lower(i), vb.state_upper(i)}, "state bound " + std::to_string(i));
  for (int i = 0; i < kNumControls; ++i) {
    require_interval({vb.control_lower(i), vb.control_upper(i)}, "control bound " + std::to_string(i));
  }
  for (int i = 0; i < kNumAlgebraic; ++i) {
    require_interval({vb.algebraic_lower(i), vb.algebraic_upper(i)}, "algebraic bound " + std::to_string(i));
  }
  require(c.solver.max_iterations > 0, "solver.max_iterations must be positive");
  require(c.solver.kkt_tolerance > 0.0 && c.solver.feasibility_tolerance > 0.0, "solver tolerances must be positive");
  require(c.solver.barrier_reduction > 0.0 && c.solver.barrier_reduction < 1.0,
          "solver.barrier_reduction must lie in (0, 1)");
  require(!c.output.directory.empty(), "output.directory must not be empty");
}

}  // namespace awes
