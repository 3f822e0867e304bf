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

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "drmpc/drilqr.hpp"
#include "drmpc/sim.hpp"

namespace drmpc {

/// A fully validated experiment description loaded from a JSON file.
/// Unknown keys are rejected so runs stay exactly reproducible.
struct ExperimentConfig {
  explicit ExperimentConfig(DiscreteModel m) : model(std::move(m)) {}

  int schema_version = 1;

  DiscreteModel model;
  int horizon = 0;
  CostWeights weights;
  LinearStateConstraints constraints;
  WassersteinBall ball;
  SupportPolytope support;
  DisturbanceSampler disturbance;
  std::uint64_t simulation_seed = 0;
  Vector x0;
  SolverOptions solver;
  std::string output_dir = "out";

  // Optional curvature scan boxes for the remainder diagnostics.
  std::optional<Box> curvature_state_box;
  std::optional<Box> curvature_input_box;
  int curvature_grid = 9;
};

/// Parse and validate a config file. Throws InvalidInput with a
/// line-anchored message on parse errors and a key-anchored message on
/// validation errors.
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace drmpc
