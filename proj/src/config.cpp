/*
 Copyright 2026 The drmpc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "drmpc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "drmpc/io.hpp"

namespace drmpc {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InvalidInput("config " + where + ": " + what);
}

void check_keys(const json& node, const std::string& where,
                const std::set<std::string>& allowed) {
  for (const auto& item : node.items())
    if (!allowed.count(item.key()))
      fail(where, "unknown key '" + item.key() + "'");
}

const json& get(const json& node, const std::string& where,
                const std::string& key) {
  if (!node.contains(key)) fail(where, "missing key '" + key + "'");
  return node.at(key);
}

Matrix parse_matrix(const json& node, const std::string& where) {
  if (!node.is_array() || node.empty() || !node[0].is_array())
    fail(where, "expected a nested list of rows");
  const size_t cols = node[0].size();
  Matrix out(node.size(), cols);
  for (size_t r = 0; r < node.size(); ++r) {
    if (!node[r].is_array() || node[r].size() != cols)
      fail(where, "ragged rows");
    for (size_t c = 0; c < cols; ++c) {
      if (!node[r][c].is_number()) fail(where, "non-numeric entry");
      out(r, c) = node[r][c].get<double>();
    }
  }
  return out;
}

Vector parse_vector(const json& node, const std::string& where) {
  if (!node.is_array() || node.empty()) fail(where, "expected a list");
  Vector out(node.size());
  for (size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number()) fail(where, "non-numeric entry");
    out(i) = node[i].get<double>();
  }
  return out;
}

DiscreteModel parse_model(const json& node) {
  check_keys(node, "model", {"name", "params", "h", "jacobians"});
  const std::string name = get(node, "model", "name").get<std::string>();
  const double h = get(node, "model", "h").get<double>();
  JacobianMethod method = JacobianMethod::Analytic;
  if (node.contains("jacobians")) {
    const std::string mode = node.at("jacobians").get<std::string>();
    if (mode == "analytic") method = JacobianMethod::Analytic;
    else if (mode == "finite_difference") method = JacobianMethod::FiniteDifference;
    else fail("model.jacobians", "expected 'analytic' or 'finite_difference'");
  }
  const json params = node.contains("params") ? node.at("params") : json::object();
  if (name == "mass_spring") {
    check_keys(params, "model.params", {"mass", "k1", "k2"});
    const double mass = params.value("mass", 2.0);
    const double k1 = params.value("k1", 3.0);
    const double k2 = params.value("k2", 2.0);
    if (mass <= 0.0) fail("model.params.mass", "must be positive");
    return discretize_rk4(mass_spring(mass, k1, k2), h, method);
  }
  if (name == "linear") {
    check_keys(params, "model.params", {"A", "B"});
    const Matrix a = parse_matrix(get(params, "model.params", "A"), "model.params.A");
    const Matrix b = parse_matrix(get(params, "model.params", "B"), "model.params.B");
    return linear_discrete(a, b, h);
  }
  fail("model.name", "unknown model '" + name + "'");
}

GroundNorm parse_ground_norm(const json& node) {
  if (node.is_number_integer() && node.get<int>() == 1) return GroundNorm::One;
  if (node.is_string() && (node.get<std::string>() == "inf" ||
                           node.get<std::string>() == "infinity"))
    return GroundNorm::Infinity;
  fail("ball.ground_norm", "expected 1 or \"inf\"");
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("config: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // Convert the byte offset to a line number for the error message.
    size_t line = 1;
    for (size_t i = 0; i < std::min(e.byte, text.size()); ++i)
      if (text[i] == '\n') ++line;
    throw InvalidInput("config " + path + " line " + std::to_string(line) +
                       ": " + e.what());
  }

  check_keys(root, "root",
             {"schema_version", "model", "horizon", "weights", "constraints",
              "ball", "support", "disturbance", "gain_mode", "fixed_gain",
              "x0", "solver", "curvature", "output_dir"});

  const int schema = get(root, "root", "schema_version").get<int>();
  if (schema != 1) fail("schema_version", "unsupported version");

  ExperimentConfig cfg(parse_model(get(root, "root", "model")));
  const int n_x = cfg.model.n_x();
  const int n_u = cfg.model.n_u();
  cfg.schema_version = schema;
  cfg.horizon = get(root, "root", "horizon").get<int>();
  if (cfg.horizon < 1) fail("horizon", "must be at least 1");

  // Support region first; samples are validated against it.
  {
    const json& node = get(root, "root", "support");
    if (node.contains("lower") || node.contains("upper")) {
      check_keys(node, "support", {"lower", "upper"});
      const Vector lo = parse_vector(get(node, "support", "lower"), "support.lower");
      const Vector hi = parse_vector(get(node, "support", "upper"), "support.upper");
      if (lo.size() != n_x) fail("support", "dimension mismatch with the model");
      cfg.support = box_support(lo, hi);
    } else {
      check_keys(node, "support", {"H", "h"});
      cfg.support.H = parse_matrix(get(node, "support", "H"), "support.H");
      cfg.support.h = parse_vector(get(node, "support", "h"), "support.h");
      if (cfg.support.dim() != n_x) fail("support", "dimension mismatch with the model");
    }
    cfg.support.validate();
  }

  // Disturbance sampler.
  {
    const json& node = get(root, "root", "disturbance");
    check_keys(node, "disturbance", {"lower", "upper", "seed"});
    cfg.disturbance.lower =
        parse_vector(get(node, "disturbance", "lower"), "disturbance.lower");
    cfg.disturbance.upper =
        parse_vector(get(node, "disturbance", "upper"), "disturbance.upper");
    cfg.simulation_seed = get(node, "disturbance", "seed").get<std::uint64_t>();
    if (cfg.disturbance.dim() != n_x)
      fail("disturbance", "dimension mismatch with the model");
    cfg.disturbance.validate(cfg.support);
  }

  // Ambiguity ball.
  {
    const json& node = get(root, "root", "ball");
    check_keys(node, "ball", {"eps", "ground_norm", "samples"});
    cfg.ball.eps = get(node, "ball", "eps").get<double>();
    if (cfg.ball.eps < 0.0) fail("ball.eps", "must be nonnegative");
    cfg.ball.ground_norm = node.contains("ground_norm")
                               ? parse_ground_norm(node.at("ground_norm"))
                               : GroundNorm::One;
    const json& samples = get(node, "ball", "samples");
    if (samples.contains("file")) {
      check_keys(samples, "ball.samples", {"file"});
      cfg.ball.center.samples =
          io::read_samples_csv(samples.at("file").get<std::string>(), n_x);
    } else {
      check_keys(samples, "ball.samples", {"seed", "count"});
      const auto seed = get(samples, "ball.samples", "seed").get<std::uint64_t>();
      const int count = get(samples, "ball.samples", "count").get<int>();
      if (count < 1) fail("ball.samples.count", "must be at least 1");
      const auto draws = cfg.disturbance.sequence(seed, count);
      cfg.ball.center.samples = Matrix(count, n_x);
      for (int i = 0; i < count; ++i)
        cfg.ball.center.samples.row(i) = draws[i].transpose();
    }
    cfg.ball.validate();
    for (int l = 0; l < cfg.ball.center.count(); ++l)
      if (!cfg.support.contains(cfg.ball.center.samples.row(l).transpose()))
        fail("ball.samples", "sample " + std::to_string(l) +
                                 " lies outside the support");
  }

  // Weights.
  {
    const json& node = get(root, "root", "weights");
    check_keys(node, "weights", {"Q", "R", "Qf"});
    cfg.weights.Q = parse_matrix(get(node, "weights", "Q"), "weights.Q");
    cfg.weights.R = parse_matrix(get(node, "weights", "R"), "weights.R");
    const json& qf = get(node, "weights", "Qf");
    if (qf.is_string()) {
      if (qf.get<std::string>() != "stationary")
        fail("weights.Qf", "expected a matrix or \"stationary\"");
      CostWeights tmp{cfg.weights.Q, cfg.weights.R, cfg.weights.Q};
      auto [a0, b0] = jacobians(cfg.model, Vector::Zero(n_x), Vector::Zero(n_u));
      cfg.weights.Qf = stationary_lqr(a0, b0, tmp).P;
    } else {
      cfg.weights.Qf = parse_matrix(qf, "weights.Qf");
    }
    cfg.weights.validate(n_x, n_u);
  }

  // Constraints.
  {
    const json& node = get(root, "root", "constraints");
    check_keys(node, "constraints", {"F", "f"});
    cfg.constraints.F = parse_matrix(get(node, "constraints", "F"), "constraints.F");
    cfg.constraints.f = parse_vector(get(node, "constraints", "f"), "constraints.f");
    cfg.constraints.validate(n_x);
  }

  cfg.x0 = parse_vector(get(root, "root", "x0"), "x0");
  if (cfg.x0.size() != n_x) fail("x0", "dimension mismatch with the model");

  // Gain mode.
  {
    const std::string mode = get(root, "root", "gain_mode").get<std::string>();
    if (mode == "riccati") cfg.solver.gain_mode = GainMode::Riccati;
    else if (mode == "fixed") cfg.solver.gain_mode = GainMode::Fixed;
    else if (mode == "zero") cfg.solver.gain_mode = GainMode::Zero;
    else fail("gain_mode", "expected riccati, fixed, or zero");
    if (root.contains("fixed_gain"))
      cfg.solver.fixed_gain = parse_matrix(root.at("fixed_gain"), "fixed_gain");
    if (cfg.solver.gain_mode == GainMode::Fixed) {
      if (cfg.solver.fixed_gain.rows() != n_u ||
          cfg.solver.fixed_gain.cols() != n_x)
        fail("fixed_gain", "required with shape n_u x n_x in fixed mode");
    }
  }

  // Solver options.
  if (root.contains("solver")) {
    const json& node = root.at("solver");
    check_keys(node, "solver",
               {"max_outer_iters", "tol_traj", "tol_beta", "ocp_max_iterations",
                "ocp_penalty_weight"});
    cfg.solver.max_outer_iters = node.value("max_outer_iters", 50);
    cfg.solver.tol_traj = node.value("tol_traj", 1e-6);
    cfg.solver.tol_beta = node.value("tol_beta", 1e-8);
    cfg.solver.ocp.max_iterations = node.value("ocp_max_iterations", 100);
    cfg.solver.ocp.penalty_weight = node.value("ocp_penalty_weight", 1e4);
    cfg.solver.validate();
  }

  // Curvature scan boxes.
  if (root.contains("curvature")) {
    const json& node = root.at("curvature");
    check_keys(node, "curvature",
               {"state_lower", "state_upper", "input_lower", "input_upper",
                "grid"});
    cfg.curvature_state_box =
        Box(parse_vector(get(node, "curvature", "state_lower"), "curvature"),
            parse_vector(get(node, "curvature", "state_upper"), "curvature"));
    cfg.curvature_input_box =
        Box(parse_vector(get(node, "curvature", "input_lower"), "curvature"),
            parse_vector(get(node, "curvature", "input_upper"), "curvature"));
    cfg.curvature_grid = node.value("grid", 9);
    if (cfg.curvature_grid < 2) fail("curvature.grid", "need at least 2 points");
  }

  if (root.contains("output_dir"))
    cfg.output_dir = root.at("output_dir").get<std::string>();

  return cfg;
}

}  // namespace drmpc
