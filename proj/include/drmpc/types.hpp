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

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace drmpc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Thrown on malformed or inconsistent caller input.
class InvalidInput : public std::runtime_error {
 public:
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a computation produces non-finite values or a factorization
/// breaks down beyond recovery.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Ground metric used by the transport distance. The dual of the 1-norm is
/// the max-norm and vice versa.
enum class GroundNorm { One, Infinity };

inline double vector_norm(const Vector& v, GroundNorm g) {
  return g == GroundNorm::One ? v.lpNorm<1>() : v.lpNorm<Eigen::Infinity>();
}

inline double dual_vector_norm(const Vector& v, GroundNorm g) {
  return g == GroundNorm::One ? v.lpNorm<Eigen::Infinity>() : v.lpNorm<1>();
}

/// Matrix norm induced by the ground norm: max absolute column sum for the
/// 1-norm, max absolute row sum for the max-norm.
inline double induced_matrix_norm(const Matrix& m, GroundNorm g) {
  if (g == GroundNorm::One) return m.cwiseAbs().colwise().sum().maxCoeff();
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidInput(what);
}

}  // namespace drmpc
