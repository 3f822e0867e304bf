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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "drmpc/config.hpp"
#include "drmpc/io.hpp"
#include "drmpc/linerr.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace drmpc;

namespace {

// Exit codes are a stable contract.
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInfeasible = 2;
constexpr int kNonConvergence = 3;
constexpr int kNumerical = 4;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int runs = 30;
  std::string mode = "config";
  int threads = 0;
  bool verbose = false;
};

GainMode parse_mode_name(const std::string& name) {
  if (name == "riccati") return GainMode::Riccati;
  if (name == "fixed") return GainMode::Fixed;
  if (name == "zero") return GainMode::Zero;
  throw InvalidInput("unknown gain mode '" + name + "'");
}

std::string mode_name(GainMode mode) {
  switch (mode) {
    case GainMode::Riccati: return "riccati";
    case GainMode::Fixed: return "fixed";
    case GainMode::Zero: return "zero";
  }
  return "unknown";
}

ModeSpec mode_spec_for(const ExperimentConfig& cfg, GainMode mode) {
  switch (mode) {
    case GainMode::Riccati: return ModeSpec::riccati();
    case GainMode::Fixed: return ModeSpec::fixed(cfg.solver.fixed_gain);
    case GainMode::Zero: return ModeSpec::zero();
  }
  throw InvalidInput("unknown gain mode");
}

int status_exit_code(DrStatus status) {
  switch (status) {
    case DrStatus::Converged: return kOk;
    case DrStatus::Infeasible: return kInfeasible;
    case DrStatus::NonConvergence: return kNonConvergence;
  }
  return kNumerical;
}

fs::path mode_dir(const std::string& out_dir, GainMode mode) {
  return fs::path(out_dir) / ("solve_" + mode_name(mode));
}

void write_solution(const fs::path& dir, const ExperimentConfig& cfg,
                    const DrSolution& sol) {
  fs::create_directories(dir);
  io::write_csv((dir / "trajectory.csv").string(),
                io::trajectory_header(cfg.model.n_x(), cfg.model.n_u()),
                io::trajectory_to_table(sol.traj));
  io::write_csv((dir / "beta.csv").string(),
                io::backoffs_header(cfg.constraints.rows()),
                io::backoffs_to_table(sol.beta));
  io::write_csv((dir / "gains.csv").string(),
                io::gains_header(cfg.model.n_u(), cfg.model.n_x()),
                io::gains_to_table(sol.gains));

  json diag;
  diag["schema_version"] = 1;
  diag["status"] = sol.status == DrStatus::Converged        ? "converged"
                   : sol.status == DrStatus::Infeasible     ? "infeasible"
                                                            : "non_convergence";
  diag["outer_iterations"] = sol.outer_iterations;
  diag["objective"] = sol.objective;
  diag["iterations"] = json::array();
  for (const auto& it : sol.diagnostics) {
    json row;
    row["iteration"] = it.iteration;
    row["objective"] = it.objective;
    row["beta_max"] = it.beta_max;
    row["traj_change"] = it.traj_change;
    row["beta_change"] = it.beta_change;
    row["ocp_kkt"] = it.ocp_kkt;
    row["ocp_iterations"] = it.ocp_iterations;
    diag["iterations"].push_back(row);
  }
  std::ofstream out(dir / "diagnostics.json");
  out << diag.dump(2) << "\n";
}

DrSolution load_or_solve(const ExperimentConfig& cfg, GainMode mode,
                         bool verbose, bool* loaded = nullptr) {
  SolverOptions opts = cfg.solver;
  opts.gain_mode = mode;
  opts.verbose = verbose;
  const fs::path dir = mode_dir(cfg.output_dir, mode);
  if (fs::exists(dir / "trajectory.csv") && fs::exists(dir / "beta.csv") &&
      fs::exists(dir / "gains.csv")) {
    DrSolution sol;
    sol.traj = io::trajectory_from_table(
        io::read_csv((dir / "trajectory.csv").string()).rows, cfg.model.n_x(),
        cfg.model.n_u());
    sol.beta = io::backoffs_from_table(
        io::read_csv((dir / "beta.csv").string()).rows);
    sol.gains = io::gains_from_table(
        io::read_csv((dir / "gains.csv").string()).rows, cfg.model.n_u(),
        cfg.model.n_x());
    sol.status = DrStatus::Converged;
    if (loaded) *loaded = true;
    return sol;
  }
  DrSolution sol = drmpc::solve(cfg.model, cfg.weights, cfg.constraints,
                                cfg.ball, cfg.support, cfg.x0, cfg.horizon,
                                opts);
  write_solution(dir, cfg, sol);
  if (loaded) *loaded = false;
  return sol;
}

ExperimentConfig load_config_with_args(const CommonArgs& args) {
  ExperimentConfig cfg = load_experiment_config(args.config_path);
  if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
  if (args.seed.has_value()) cfg.simulation_seed = *args.seed;
  cfg.solver.threads = args.threads > 0
                           ? args.threads
                           : static_cast<int>(std::max(
                                 1u, std::thread::hardware_concurrency()));
  return cfg;
}

int cmd_solve(const CommonArgs& args) {
  ExperimentConfig cfg = load_config_with_args(args);
  SolverOptions opts = cfg.solver;
  opts.verbose = args.verbose;
  DrSolution sol = drmpc::solve(cfg.model, cfg.weights, cfg.constraints,
                                cfg.ball, cfg.support, cfg.x0, cfg.horizon,
                                opts);
  write_solution(mode_dir(cfg.output_dir, opts.gain_mode), cfg, sol);
  std::cout << "status: "
            << (sol.status == DrStatus::Converged ? "converged"
                : sol.status == DrStatus::Infeasible ? "infeasible"
                                                     : "non-convergence")
            << ", outer iterations: " << sol.outer_iterations
            << ", objective: " << sol.objective
            << ", max back-off: " << sol.beta.beta.maxCoeff() << "\n";
  if (sol.status == DrStatus::Infeasible && !sol.diagnostics.empty())
    std::cout << "first infeasible iterate reported in diagnostics.json\n";
  return status_exit_code(sol.status);
}

int cmd_backoff(const CommonArgs& args) {
  ExperimentConfig cfg = load_config_with_args(args);
  // One back-off evaluation along the default initial trajectory with the
  // configured gain mode; no outer loop.
  NominalTrajectory traj =
      default_initial_trajectory(cfg.model, cfg.weights, cfg.x0, cfg.horizon);
  const LtvSystem ltv = ltv_along(cfg.model, traj);
  GainSchedule gains;
  switch (cfg.solver.gain_mode) {
    case GainMode::Riccati:
      gains = riccati_gains(ltv, cfg.weights);
      break;
    case GainMode::Fixed:
      gains.K.assign(cfg.horizon, cfg.solver.fixed_gain);
      break;
    case GainMode::Zero:
      gains.K.assign(cfg.horizon,
                     Matrix::Zero(cfg.model.n_u(), cfg.model.n_x()));
      break;
  }
  const BackoffSchedule beta =
      compute_backoffs(cfg.constraints, ltv, gains, cfg.ball, cfg.support,
                       cfg.solver.threads);
  fs::create_directories(cfg.output_dir);
  const fs::path path = fs::path(cfg.output_dir) / "beta.csv";
  io::write_csv(path.string(), io::backoffs_header(cfg.constraints.rows()),
                io::backoffs_to_table(beta));
  std::cout << "wrote " << path.string()
            << ", max back-off: " << beta.beta.maxCoeff() << "\n";
  return kOk;
}

int cmd_simulate(const CommonArgs& args) {
  ExperimentConfig cfg = load_config_with_args(args);
  std::vector<GainMode> modes;
  if (args.mode == "all")
    modes = {GainMode::Riccati, GainMode::Fixed, GainMode::Zero};
  else if (args.mode == "config")
    modes = {cfg.solver.gain_mode};
  else
    modes = {parse_mode_name(args.mode)};

  std::vector<DrSolution> solutions;
  std::vector<std::pair<ModeSpec, const DrSolution*>> runs;
  solutions.reserve(modes.size());
  for (const GainMode mode : modes) {
    solutions.push_back(load_or_solve(cfg, mode, args.verbose));
    if (solutions.back().status == DrStatus::Infeasible) return kInfeasible;
  }
  for (size_t i = 0; i < modes.size(); ++i)
    runs.emplace_back(mode_spec_for(cfg, modes[i]), &solutions[i]);

  const auto summaries =
      monte_carlo(cfg.model, runs, cfg.constraints, cfg.x0, cfg.disturbance,
                  args.runs, cfg.simulation_seed);

  json summary;
  summary["schema_version"] = 1;
  summary["runs"] = args.runs;
  summary["seed"] = cfg.simulation_seed;
  for (size_t k = 0; k < summaries.size(); ++k) {
    const auto& s = summaries[k];
    const fs::path dir = fs::path(cfg.output_dir) / ("simulate_" + s.mode);
    fs::create_directories(dir);

    // Per-realization trajectories and the error-increment table.
    const int n = solutions[k].traj.horizon();
    const int n_x = cfg.model.n_x();
    const int n_u = cfg.model.n_u();
    std::vector<std::string> header{"realization", "step"};
    for (int j = 0; j < n_x; ++j) header.push_back("x" + std::to_string(j));
    for (int j = 0; j < n_u; ++j) header.push_back("u" + std::to_string(j));
    for (int j = 0; j < n_x; ++j) header.push_back("w" + std::to_string(j));
    for (int j = 0; j < n_x; ++j) header.push_back("dx" + std::to_string(j));
    Matrix table(static_cast<Eigen::Index>(s.realizations.size()) * (n + 1),
                 2 + 3 * n_x + n_u);
    table.setConstant(std::numeric_limits<double>::quiet_NaN());
    Eigen::Index row = 0;
    for (size_t r = 0; r < s.realizations.size(); ++r) {
      const auto& real = s.realizations[r];
      for (int i = 0; i <= n; ++i, ++row) {
        table(row, 0) = static_cast<double>(r);
        table(row, 1) = i;
        table.block(row, 2, 1, n_x) = real.x[i].transpose();
        if (i < n) {
          table.block(row, 2 + n_x, 1, n_u) = real.u[i].transpose();
          table.block(row, 2 + n_x + n_u, 1, n_x) = real.w[i].transpose();
        }
        table.block(row, 2 + 2 * n_x + n_u, 1, n_x) = real.dx[i].transpose();
      }
    }
    io::write_csv((dir / "realizations.csv").string(), header, table);

    // Arrow data: error vector at i (tail) and i+1 (head).
    std::vector<std::string> inc_header{"realization", "step"};
    for (int j = 0; j < n_x; ++j)
      inc_header.push_back("dx_tail" + std::to_string(j));
    for (int j = 0; j < n_x; ++j)
      inc_header.push_back("dx_head" + std::to_string(j));
    Matrix increments(static_cast<Eigen::Index>(s.realizations.size()) * n,
                      2 + 2 * n_x);
    row = 0;
    for (size_t r = 0; r < s.realizations.size(); ++r) {
      const auto& real = s.realizations[r];
      for (int i = 0; i < n; ++i, ++row) {
        increments(row, 0) = static_cast<double>(r);
        increments(row, 1) = i;
        increments.block(row, 2, 1, n_x) = real.dx[i].transpose();
        increments.block(row, 2 + n_x, 1, n_x) = real.dx[i + 1].transpose();
      }
    }
    io::write_csv((dir / "error_increments.csv").string(), inc_header,
                  increments);

    json block;
    block["mean_terminal_error"] = s.mean_terminal;
    block["max_terminal_error"] = s.max_terminal;
    block["violation_frequency_runs"] = s.violation_frequency_runs;
    block["violation_frequency_steps"] = s.violation_frequency_steps;
    block["per_step_mean_error"] =
        std::vector<double>(s.mean_error.data(),
                            s.mean_error.data() + s.mean_error.size());
    block["per_step_max_error"] = std::vector<double>(
        s.max_error.data(), s.max_error.data() + s.max_error.size());
    summary["modes"][s.mode] = block;
  }
  std::ofstream out(fs::path(cfg.output_dir) / "simulation_summary.json");
  out << summary.dump(2) << "\n";
  std::cout << "simulated " << args.runs << " realizations for "
            << summaries.size() << " mode(s); summary written\n";
  return kOk;
}

int cmd_tube(const CommonArgs& args) {
  ExperimentConfig cfg = load_config_with_args(args);
  const GainMode mode = args.mode == "config" ? cfg.solver.gain_mode
                                              : parse_mode_name(args.mode);
  DrSolution sol = load_or_solve(cfg, mode, args.verbose);
  if (sol.status == DrStatus::Infeasible) return kInfeasible;

  const LtvSystem ltv = ltv_along(cfg.model, sol.traj);
  const TubeRadii radii =
      tube_radii(ltv, sol.gains, cfg.ball.eps, 1, cfg.ball.ground_norm);

  const fs::path dir = fs::path(cfg.output_dir) / ("tube_" + mode_name(mode));
  fs::create_directories(dir);
  Matrix radii_table(radii.rho.size(), 3);
  for (Eigen::Index i = 0; i < radii.rho.size(); ++i) {
    radii_table(i, 0) = static_cast<double>(i);
    radii_table(i, 1) = radii.rho[i];
    radii_table(i, 2) = radii.rho_factored[i];
  }
  io::write_csv((dir / "radii.csv").string(),
                {"step", "rho", "rho_factored"}, radii_table);

  // Coupled validation draw with the configured simulation seed.
  const CoupledDraw draw =
      draw_coupled_sequences(cfg.ball, cfg.support, cfg.ball.center.count(),
                             cfg.horizon, cfg.simulation_seed);
  const CoupledErrorPaths paths =
      coupled_rollouts(ltv, sol.gains, draw.nominal, draw.perturbed);
  const auto checks = validate_tube(paths.nominal, paths.realized, radii);

  Matrix margins(static_cast<Eigen::Index>(checks.size()), 5);
  bool all_pass = true;
  for (size_t i = 0; i < checks.size(); ++i) {
    margins(i, 0) = checks[i].step;
    margins(i, 1) = checks[i].distance;
    margins(i, 2) = checks[i].bound;
    margins(i, 3) = checks[i].margin;
    margins(i, 4) = checks[i].pass ? 1.0 : 0.0;
    all_pass = all_pass && checks[i].pass;
  }
  io::write_csv((dir / "validation.csv").string(),
                {"step", "distance", "bound", "margin", "pass"}, margins);
  std::cout << "tube radii and validation margins written; all steps "
            << (all_pass ? "pass" : "FAIL") << "\n";
  return all_pass ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributionally robust nonlinear MPC via iterative LQR"};
  app.require_subcommand(1);

  CommonArgs args;
  auto add_common = [&](CLI::App* cmd, bool with_runs_mode) {
    cmd->add_option("--config", args.config_path, "experiment config JSON")
        ->required();
    cmd->add_option("--out", args.out_dir, "output directory override");
    cmd->add_option("--seed", args.seed, "simulation seed override");
    cmd->add_option("--threads", args.threads,
                    "worker threads for the back-off grid (default: cores)");
    cmd->add_flag("--verbose", args.verbose, "per-iteration progress");
    if (with_runs_mode) {
      cmd->add_option("--runs", args.runs, "number of realizations");
      cmd->add_option("--mode", args.mode,
                      "riccati|fixed|zero|all (default: config)");
    }
  };

  auto* solve_cmd =
      app.add_subcommand("solve", "run the outer loop and write the plan");
  add_common(solve_cmd, false);
  auto* simulate_cmd = app.add_subcommand(
      "simulate", "closed-loop Monte-Carlo rollouts against a solved plan");
  add_common(simulate_cmd, true);
  auto* tube_cmd = app.add_subcommand(
      "tube", "reachable-set radii and coupled-transport validation");
  add_common(tube_cmd, true);
  auto* backoff_cmd = app.add_subcommand(
      "backoff", "one back-off table along the initial trajectory");
  add_common(backoff_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(args);
    if (simulate_cmd->parsed()) return cmd_simulate(args);
    if (tube_cmd->parsed()) return cmd_tube(args);
    if (backoff_cmd->parsed()) return cmd_backoff(args);
    return kUsage;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
}
