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

#include "drmpc/io.hpp"

#include <cmath>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace drmpc {
namespace io {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

bool parse_double(const std::string& cell, double& value) {
  if (cell.empty()) {
    value = kNaN;
    return true;
  }
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && *begin == ' ') ++begin;
  const auto result = std::from_chars(begin, end, value);
  return result.ec == std::errc();
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Matrix& rows) {
  require(header.size() == static_cast<size_t>(rows.cols()) || rows.size() == 0,
          "write_csv: header width mismatch");
  std::ofstream out(path);
  if (!out) throw InvalidInput("write_csv: cannot open " + path);
  out.precision(17);
  for (size_t j = 0; j < header.size(); ++j)
    out << header[j] << (j + 1 < header.size() ? "," : "\n");
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
      if (!std::isnan(rows(r, c))) out << rows(r, c);
      if (c + 1 < rows.cols()) out << ",";
    }
    out << "\n";
  }
  if (!out) throw InvalidInput("write_csv: write failed for " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("read_csv: cannot open " + path);
  CsvTable table;
  std::vector<std::vector<double>> data;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto cells = split_line(line);
    if (first) {
      first = false;
      double probe;
      if (!cells.empty() && !parse_double(cells[0], probe)) {
        table.header = cells;
        continue;
      }
    }
    std::vector<double> row(cells.size());
    for (size_t j = 0; j < cells.size(); ++j) {
      if (!parse_double(cells[j], row[j]))
        throw InvalidInput("read_csv: non-numeric cell '" + cells[j] + "' in " +
                           path);
    }
    data.push_back(std::move(row));
  }
  if (data.empty()) {
    table.rows = Matrix(0, static_cast<Eigen::Index>(table.header.size()));
    return table;
  }
  const size_t width = data[0].size();
  for (const auto& row : data)
    require(row.size() == width, "read_csv: ragged rows in " + path);
  table.rows = Matrix(static_cast<Eigen::Index>(data.size()),
                      static_cast<Eigen::Index>(width));
  for (size_t r = 0; r < data.size(); ++r)
    for (size_t c = 0; c < width; ++c)
      table.rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          data[r][c];
  return table;
}

Matrix read_samples_csv(const std::string& path, int expected_cols) {
  const CsvTable table = read_csv(path);
  require(table.rows.cols() == expected_cols,
          "samples file " + path + ": expected " +
              std::to_string(expected_cols) + " columns");
  require(table.rows.rows() >= 1, "samples file " + path + ": no samples");
  require(table.rows.allFinite(), "samples file " + path + ": missing values");
  return table.rows;
}

std::vector<std::string> trajectory_header(int n_x, int n_u) {
  std::vector<std::string> header{"step"};
  for (int j = 0; j < n_x; ++j) header.push_back("z" + std::to_string(j));
  for (int j = 0; j < n_u; ++j) header.push_back("v" + std::to_string(j));
  for (int j = 0; j < n_u; ++j) header.push_back("c" + std::to_string(j));
  return header;
}

Matrix trajectory_to_table(const NominalTrajectory& traj) {
  const int n = traj.horizon();
  const int n_x = static_cast<int>(traj.z[0].size());
  const int n_u = static_cast<int>(traj.v.empty() ? 0 : traj.v[0].size());
  Matrix table = Matrix::Constant(n + 1, 1 + n_x + 2 * n_u, kNaN);
  for (int i = 0; i <= n; ++i) {
    table(i, 0) = i;
    table.block(i, 1, 1, n_x) = traj.z[i].transpose();
    if (i < n) {
      table.block(i, 1 + n_x, 1, n_u) = traj.v[i].transpose();
      table.block(i, 1 + n_x + n_u, 1, n_u) = traj.c[i].transpose();
    }
  }
  return table;
}

NominalTrajectory trajectory_from_table(const Matrix& table, int n_x,
                                        int n_u) {
  require(table.cols() == 1 + n_x + 2 * n_u,
          "trajectory table: column count mismatch");
  const int n = static_cast<int>(table.rows()) - 1;
  require(n >= 1, "trajectory table: too few rows");
  NominalTrajectory traj;
  traj.z.resize(n + 1);
  traj.v.resize(n);
  traj.c.resize(n);
  for (int i = 0; i <= n; ++i) {
    traj.z[i] = table.block(i, 1, 1, n_x).transpose();
    if (i < n) {
      traj.v[i] = table.block(i, 1 + n_x, 1, n_u).transpose();
      traj.c[i] = table.block(i, 1 + n_x + n_u, 1, n_u).transpose();
      require(traj.v[i].allFinite() && traj.c[i].allFinite(),
              "trajectory table: missing input entries");
    }
    require(traj.z[i].allFinite(), "trajectory table: missing state entries");
  }
  return traj;
}

std::vector<std::string> gains_header(int n_u, int n_x) {
  std::vector<std::string> header{"step"};
  for (int r = 0; r < n_u; ++r)
    for (int c = 0; c < n_x; ++c)
      header.push_back("k_" + std::to_string(r) + "_" + std::to_string(c));
  return header;
}

Matrix gains_to_table(const GainSchedule& gains) {
  const int n = gains.horizon();
  const int n_u = static_cast<int>(gains.K[0].rows());
  const int n_x = static_cast<int>(gains.K[0].cols());
  Matrix table(n, 1 + n_u * n_x);
  for (int i = 0; i < n; ++i) {
    table(i, 0) = i;
    for (int r = 0; r < n_u; ++r)
      for (int c = 0; c < n_x; ++c)
        table(i, 1 + r * n_x + c) = gains.K[i](r, c);
  }
  return table;
}

GainSchedule gains_from_table(const Matrix& table, int n_u, int n_x) {
  require(table.cols() == 1 + n_u * n_x, "gain table: column count mismatch");
  GainSchedule gains;
  gains.K.resize(table.rows(), Matrix(n_u, n_x));
  for (Eigen::Index i = 0; i < table.rows(); ++i)
    for (int r = 0; r < n_u; ++r)
      for (int c = 0; c < n_x; ++c)
        gains.K[i](r, c) = table(i, 1 + r * n_x + c);
  return gains;
}

std::vector<std::string> backoffs_header(int n_f) {
  std::vector<std::string> header{"step"};
  for (int r = 0; r < n_f; ++r) header.push_back("beta_" + std::to_string(r));
  return header;
}

Matrix backoffs_to_table(const BackoffSchedule& beta) {
  Matrix table(beta.beta.rows(), beta.beta.cols() + 1);
  for (Eigen::Index i = 0; i < beta.beta.rows(); ++i) {
    table(i, 0) = static_cast<double>(i);
    table.row(i).tail(beta.beta.cols()) = beta.beta.row(i);
  }
  return table;
}

BackoffSchedule backoffs_from_table(const Matrix& table) {
  require(table.cols() >= 2 && table.rows() >= 2,
          "back-off table: too small");
  BackoffSchedule beta;
  beta.beta = table.rightCols(table.cols() - 1);
  return beta;
}

}  // namespace io
}  // namespace drmpc
