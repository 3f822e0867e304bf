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

#include <string>
#include <vector>

#include "drmpc/ocp.hpp"
#include "drmpc/types.hpp"

namespace drmpc {
namespace io {

/// Write a numeric table with a header row. NaN entries become empty cells.
/// Values are printed with enough digits to round-trip doubles exactly.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Matrix& rows);

struct CsvTable {
  std::vector<std::string> header;
  Matrix rows;  // empty cells read back as NaN
};

/// Read a CSV table. A leading non-numeric row is taken as the header.
CsvTable read_csv(const std::string& path);

/// Disturbance samples: one sample per row, no header required.
Matrix read_samples_csv(const std::string& path, int expected_cols);

// Trajectory tables: columns step, z*, v*, c*; the terminal row carries no
// input or feedforward entries.
Matrix trajectory_to_table(const NominalTrajectory& traj);
NominalTrajectory trajectory_from_table(const Matrix& table, int n_x, int n_u);
std::vector<std::string> trajectory_header(int n_x, int n_u);

// Gain tables: columns step, k_<row>_<col> in row-major order.
Matrix gains_to_table(const GainSchedule& gains);
GainSchedule gains_from_table(const Matrix& table, int n_u, int n_x);
std::vector<std::string> gains_header(int n_u, int n_x);

// Back-off tables: columns step, beta_<row>.
Matrix backoffs_to_table(const BackoffSchedule& beta);
BackoffSchedule backoffs_from_table(const Matrix& table);
std::vector<std::string> backoffs_header(int n_f);

}  // namespace io
}  // namespace drmpc
