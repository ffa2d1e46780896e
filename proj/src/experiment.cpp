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

#include "awes/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include "awes/errors.hpp"
#include "awes/initialization.hpp"
#include "awes/system.hpp"
#include "awes/tether.hpp"

namespace awes {

using nlohmann::json;

namespace {

constexpr const char* kSolverName = "awes-ipm";
constexpr const char* kSolverVersion = "1.0.0";

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string() + ": " + ec.message());
}

std::ofstream open_output(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + file.string());
  return out;
}

void write_json(const std::filesystem::path& file, const json& j) {
  std::ofstream out = open_output(file);
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + file.string());
}

json stage_json(const StageReport& s) {
  const nlp::SolveReport& r = s.report;
  return {{"tag", std::string(stage_name(s.tag))},
          {"status", std::string(nlp::status_name(r.status))},
          {"iterations", r.iterations},
          {"objective", r.objective},
          {"kkt_residual", r.kkt_residual},
          {"barrier", r.barrier},
          {"barrier_lower", s.barrier_lower},
          {"barrier_upper", s.barrier_upper},
          {"primal_infeasibility", r.primal_infeasibility},
          {"dual_infeasibility", r.dual_infeasibility},
          {"restorations", r.restorations},
          {"phi", {s.phi(0), s.phi(1), s.phi(2)}},
          {"phi_upper", {s.phi_upper(0), s.phi_upper(1), s.phi_upper(2)}},
          {"message", r.message}};
}

json solver_json(const ExperimentConfig& c) {
  return {{"name", kSolverName},
          {"version", kSolverVersion},
          {"hessian", "exact"},
          {"kkt_tolerance", c.solver.kkt_tolerance},
          {"feasibility_tolerance", c.solver.feasibility_tolerance},
          {"tau_initial", c.homotopy.tau_initial},
          {"tau_intermediate", c.homotopy.tau_intermediate},
          {"tau_final", c.homotopy.tau_final}};
}

json timing_json(const std::vector<StageReport>& stages) {
  json t = json::array();
  double total = 0.0;
  for (const StageReport& s : stages) {
    t.push_back({{"tag", std::string(stage_name(s.tag))}, {"wall_time", s.report.wall_time}});
    total += s.report.wall_time;
  }
  return {{"stages", t}, {"total_wall_time", total}};
}

// Configuration echoed into summary.json. The output location is left out so
// that identical inputs give identical bytes wherever they are written.
json result_config(const ExperimentConfig& config) {
  json c = to_json(config);
  c.erase("output");
  return c;
}

}  // namespace

LogLevel log_level_from_env() {
  const char* v = std::getenv("AWES_LOG_LEVEL");
  if (!v) return LogLevel::kInfo;
  const std::string s(v);
  if (s == "quiet" || s == "0") return LogLevel::kQuiet;
  if (s == "debug" || s == "2") return LogLevel::kDebug;
  return LogLevel::kInfo;
}

TrajectorySolution assemble_solution(const Transcription& tr, const Eigen::VectorXd& w, const ModelParams& params,
                                     double yaw_winding) {
  TrajectorySolution s;
  const Mesh& mesh = tr.mesh;
  const int nn = mesh.nodes();
  s.nodes = unpack_trajectory(w, tr.layout);
  s.yaw_winding = yaw_winding;
  const HomotopyVec<double> phi = w.tail<kNumHomotopy>();
  for (int n = 0; n < nn; ++n) {
    const NodeVariables<double>& v = s.nodes[n];
    s.time.push_back(mesh.time(n));
    const SystemEvaluation<double> ev = evaluate_system(v.x, v.u, v.z, phi, params);
    s.tether.push_back(ev.tether.positions);
    s.path_values.push_back(path_constraints(ev));
    s.power.push_back(mechanical_power(v.x.winch_rate, v.u.generator_torque));
  }
  double sum = 0.0;
  for (int n = 1; n < nn; ++n) sum += mesh.step() * s.power[n];
  s.average_power = sum / mesh.horizon;
  double out_sum = 0.0, in_sum = 0.0;
  int out_count = 0, in_count = 0;
  for (int n = 1; n < nn; ++n) {
    const double rate = s.nodes[n].x.winch_rate;
    if (rate > 0.0) {
      out_sum += s.power[n];
      ++out_count;
    } else if (rate < 0.0) {
      in_sum += s.power[n];
      ++in_count;
    }
  }
  s.reel_out_average_power = out_count ? out_sum / out_count : 0.0;
  s.retraction_average_power = in_count ? in_sum / in_count : 0.0;

  const Eigen::VectorXd ws = tr.to_scaled(w);
  double f = 0.0;
  Eigen::VectorXd c;
  tr.problem.values(ws, f, c);
  s.objective = f;
  s.periodicity_residual =
      periodicity_residual(pack(s.nodes.front().x), pack(s.nodes.back().x), yaw_winding).cwiseAbs().maxCoeff();
  for (int n = 0; n < nn; ++n) {
    for (int i = su::kFictForce; i < kNumControls; ++i) {
      const int k = tr.layout.control(n) + i;
      s.fictitious_input_max = std::max(s.fictitious_input_max, std::abs(ws(k)));
    }
  }
  const nlp::NlpProblem& p = tr.problem;
  for (Eigen::Index i = 0; i < ws.size(); ++i) {
    s.max_bound_violation = std::max({s.max_bound_violation, p.variable_lower()(i) - ws(i), ws(i) - p.variable_upper()(i)});
  }
  for (Eigen::Index r = 0; r < c.size(); ++r) {
    const double lo = p.constraint_lower()(r), hi = p.constraint_upper()(r);
    const double viol = std::max({0.0, lo - c(r), c(r) - hi});
    if (lo == hi) {
      s.max_equality_residual = std::max(s.max_equality_residual, viol);
    } else {
      s.max_bound_violation = std::max(s.max_bound_violation, viol);
    }
  }
  return s;
}

ExperimentSetup prepare_experiment(const ExperimentConfig& config) {
  validate(config);
  const PathSpec path = config.resolved_path();
  const Mesh mesh = make_mesh(config.intervals, config.horizon);
  const std::vector<NodeVariables<double>> guess = consistent_guess(path, config.params, mesh, config.guess);

  OcpDefinition ocp;
  ocp.params = config.params;
  ocp.bounds = config.resolved_variable_bounds();
  ocp.path = config.path_bounds;
  ocp.weights = config.cost.weights;
  ocp.power_reference = config.cost.power_reference;
  ocp.penalty = config.homotopy.penalty;
  ocp.fictitious_regularization = config.cost.fictitious_regularization;
  ocp.yaw_winding = yaw_winding(path.shape, path.loops, path.direction);
  for (const auto& n : guess) ocp.reference.push_back(pack(n.x));

  ExperimentSetup setup{transcribe(ocp, mesh, node_scale(guess)), pack_trajectory(guess, Vec3<double>::Ones()),
                        ocp.yaw_winding};
  return setup;
}

TrajectorySolution run_experiment(const ExperimentConfig& config, const Logger& log) {
  ExperimentSetup setup = prepare_experiment(config);
  nlp::SolverOptions options = config.solver;
  if (log.enabled(LogLevel::kDebug)) {
    std::ostream& os = *log.stream;
    options.on_iteration = [&os](const nlp::IterationLog& l) {
      os << "iter " << l.iteration << " objective " << format_number(l.objective) << " primal_inf "
         << l.primal_infeasibility << " dual_inf " << l.dual_infeasibility << " tau " << l.barrier << " step "
         << l.step << " kind " << l.kind << '\n';
    };
  }
  auto on_stage = [&log](const StageReport& s) {
    if (!log.enabled(LogLevel::kInfo)) return;
    *log.stream << "stage " << stage_name(s.tag) << ' ' << nlp::status_name(s.report.status) << " iterations "
                << s.report.iterations << " objective " << format_number(s.report.objective) << " wall_time "
                << s.report.wall_time << '\n';
  };
  PiphResult r = run_piph(setup.transcription, setup.guess, config.homotopy, options, on_stage);
  TrajectorySolution s = assemble_solution(setup.transcription, r.w, config.params, setup.yaw_winding);
  s.stages = std::move(r.stages);
  return s;
}

std::vector<std::string> trajectory_columns() {
  return {"t",          "winch_angle", "winch_rate",  "v_x",        "v_y",        "v_z",
          "omega_x",    "omega_y",     "omega_z",     "roll",       "pitch",      "yaw",
          "longitude",  "latitude",    "distance",    "generator_torque", "aileron", "elevator",
          "rudder",     "f_fict_x",    "f_fict_y",    "f_fict_z",   "tau_fict_x", "tau_fict_y",
          "tau_fict_z", "f_prop",      "tension",     "theta_n",    "phi_n",      "power"};
}

void write_outputs(const TrajectorySolution& s, const ExperimentConfig& config, const std::filesystem::path& dir) {
  ensure_directory(dir);
  {
    std::ofstream out = open_output(dir / "trajectory.csv");
    const auto cols = trajectory_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (std::size_t n = 0; n < s.nodes.size(); ++n) {
      out << format_number(s.time[n]);
      const auto v = pack(s.nodes[n]);
      for (int i = 0; i < kNodeSize; ++i) out << ',' << format_number(v(i));
      out << ',' << format_number(s.power[n]) << '\n';
    }
    if (!out) throw Error(ErrorCode::kIoError, "write failed for trajectory.csv");
  }
  {
    std::ofstream out = open_output(dir / "tether.csv");
    out << "node,t,mass,x,y,z\n";
    for (std::size_t n = 0; n < s.tether.size(); ++n) {
      for (std::size_t j = 0; j < s.tether[n].size(); ++j) {
        const Vec3<double>& p = s.tether[n][j];
        out << n << ',' << format_number(s.time[n]) << ',' << j << ',' << format_number(p.x()) << ','
            << format_number(p.y()) << ',' << format_number(p.z()) << '\n';
      }
    }
    if (!out) throw Error(ErrorCode::kIoError, "write failed for tether.csv");
  }
  json stages = json::array();
  for (const StageReport& st : s.stages) stages.push_back(stage_json(st));
  const json summary = {
      {"schema_version", kConfigSchemaVersion},
      {"name", config.name},
      {"status", "optimal"},
      {"tether_mode", std::string(tether_mode_name(config.params.tether_mode))},
      {"path_shape", std::string(path_shape_name(config.path.shape))},
      {"mesh", {{"intervals", config.intervals}, {"horizon", config.horizon}, {"step", config.horizon / config.intervals}}},
      {"tether_masses", config.params.tether.masses},
      {"wind_direction", config.params.env.wind.zeta},
      {"average_power", s.average_power},
      {"reel_out_average_power", s.reel_out_average_power},
      {"retraction_average_power", s.retraction_average_power},
      {"objective", s.objective},
      {"periodicity_residual", s.periodicity_residual},
      {"yaw_winding", s.yaw_winding},
      {"fictitious_input_max", s.fictitious_input_max},
      {"max_bound_violation", s.max_bound_violation},
      {"max_equality_residual", s.max_equality_residual},
      {"stages", stages},
      {"solver", solver_json(config)},
      {"config", result_config(config)}};
  write_json(dir / "summary.json", summary);
  write_json(dir / "timing.json", timing_json(s.stages));
}

void write_failure(const StageFailure& failure, const ExperimentConfig& config, const std::filesystem::path& dir) {
  ensure_directory(dir);
  const std::vector<StageReport>& stages = failure.history();
  json st = json::array();
  for (const StageReport& s : stages) st.push_back(stage_json(s));
  const json summary = {{"schema_version", kConfigSchemaVersion},
                        {"name", config.name},
                        {"status", "failed"},
                        {"error", error_name(ErrorCode::kStageFailure)},
                        {"failed_stage", failure.stage()},
                        {"failed_stage_tag", std::string(stage_name(failure.report().tag))},
                        {"message", failure.what()},
                        {"stages", st},
                        {"solver", solver_json(config)},
                        {"config", result_config(config)}};
  write_json(dir / "summary.json", summary);
  write_json(dir / "timing.json", timing_json(stages));
}

namespace {

std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& file, std::size_t columns) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + file.string());
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorCode::kIoError, file.string() + ": bad number '" + cell + "'");
      }
    }
    if (row.size() != columns) throw Error(ErrorCode::kIoError, file.string() + ": wrong column count");
    rows.push_back(std::move(row));
  }
  return rows;
}

// Direction of the tether pull at the aircraft in body axes.
Vec3<double> body_tether_direction(const std::vector<double>& row, const std::vector<Vec3<double>>& tether,
                                   double zeta) {
  const EulerAngles<double> q{row[1 + sx::kAttitude], row[1 + sx::kAttitude + 1], row[1 + sx::kYaw]};
  const Vec3<double> d = (tether[1] - tether[0]).normalized();
  return attitude_matrix(q) * wind_frame(zeta).transpose() * d;
}

}  // namespace

RunData load_run(const std::filesystem::path& dir) {
  RunData r;
  r.trajectory = read_numeric_csv(dir / "trajectory.csv", trajectory_columns().size());
  const auto rows = read_numeric_csv(dir / "tether.csv", 6);
  for (const auto& row : rows) {
    const auto node = static_cast<std::size_t>(row[0]);
    if (node >= r.tether.size()) r.tether.resize(node + 1);
    r.tether[node].emplace_back(row[3], row[4], row[5]);
  }
  std::ifstream in(dir / "summary.json");
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + (dir / "summary.json").string());
  try {
    in >> r.summary;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIoError, e.what());
  }
  if (r.tether.size() != r.trajectory.size()) throw Error(ErrorCode::kIoError, "tether.csv and trajectory.csv disagree");
  return r;
}

ComparisonReport compare_runs(const std::filesystem::path& dir_a, const std::filesystem::path& dir_b) {
  const RunData a = load_run(dir_a);
  const RunData b = load_run(dir_b);
  if (a.trajectory.size() != b.trajectory.size()) throw Error(ErrorCode::kMeshMismatch, "node counts differ");
  for (std::size_t n = 0; n < a.trajectory.size(); ++n) {
    if (std::abs(a.trajectory[n][0] - b.trajectory[n][0]) > 1e-9 * (1.0 + std::abs(a.trajectory[n][0]))) {
      throw Error(ErrorCode::kMeshMismatch, "time grids differ at node " + std::to_string(n));
    }
    if (a.tether[n].size() != b.tether[n].size()) throw Error(ErrorCode::kMeshMismatch, "tether discretizations differ");
  }
  const double zeta_a = a.summary.value("wind_direction", 0.0);
  const double zeta_b = b.summary.value("wind_direction", 0.0);
  const std::size_t power_col = trajectory_columns().size() - 1;
  const std::size_t rate_col = 1 + sx::kWinchRate;

  ComparisonReport r;
  r.average_power_a = a.summary.value("average_power", 0.0);
  r.average_power_b = b.summary.value("average_power", 0.0);
  r.overestimation_ratio = r.average_power_a != 0.0 ? r.average_power_b / r.average_power_a - 1.0 : 0.0;
  double out_sum = 0.0, in_sum = 0.0;
  int out_count = 0, in_count = 0;
  for (std::size_t n = 0; n < a.trajectory.size(); ++n) {
    const auto& ra = a.trajectory[n];
    const auto& rb = b.trajectory[n];
    r.time.push_back(ra[0]);
    const double dp = rb[power_col] - ra[power_col];
    r.power_difference.push_back(dp);
    const Vec3<double> da = body_tether_direction(ra, a.tether[n], zeta_a);
    const Vec3<double> db = body_tether_direction(rb, b.tether[n], zeta_b);
    const double angle = std::atan2(da.cross(db).norm(), da.dot(db));
    r.angle_difference.push_back(angle);
    if (n == 0) continue;  // node 0 duplicates node N
    if (ra[rate_col] > 0.0) {
      out_sum += dp;
      ++out_count;
    } else if (ra[rate_col] < 0.0) {
      in_sum += dp;
      ++in_count;
    }
    if (angle > r.max_angle_difference) {
      r.max_angle_difference = angle;
      r.max_angle_node = static_cast<int>(n);
      r.winch_rate_at_max_angle = ra[rate_col];
    }
  }
  r.reel_out_power_difference = out_count ? out_sum / out_count : 0.0;
  r.retraction_power_difference = in_count ? in_sum / in_count : 0.0;
  return r;
}

json to_json(const ComparisonReport& r) {
  return {{"average_power_a", r.average_power_a},
          {"average_power_b", r.average_power_b},
          {"overestimation_ratio", r.overestimation_ratio},
          {"reel_out_power_difference", r.reel_out_power_difference},
          {"retraction_power_difference", r.retraction_power_difference},
          {"max_angle_difference", r.max_angle_difference},
          {"max_angle_node", r.max_angle_node},
          {"max_angle_time", r.time.empty() ? 0.0 : r.time[r.max_angle_node]},
          {"winch_rate_at_max_angle", r.winch_rate_at_max_angle},
          {"max_angle_in_retraction", r.winch_rate_at_max_angle < 0.0},
          {"time", r.time},
          {"power_difference", r.power_difference},
          {"angle_difference", r.angle_difference}};
}

}  // namespace awes
