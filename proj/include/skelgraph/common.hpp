/*
 * Copyright 2026 The skelgraph Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SKELGRAPH_COMMON_HPP
#define SKELGRAPH_COMMON_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace skelgraph {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using MatrixXd = Mat<double>;
using VectorXd = Vec<double>;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
using IndexList = std::vector<int>;

/// Coordinate dimension of a skeleton joint.
inline constexpr int kJointDim = 3;

enum class ErrorCode {
  SequenceTooShort,
  IndexOutOfRange,
  InvalidConfig,
  LayoutMismatch,
  DimensionMismatch,
  EmptyNeighborhood,
  UncoveredJoint,
  InvalidLength,
  InvalidLabel,
  GraphNotRecorded,
  VersionMismatch,
  ParseError,
  IO,
};

const char* error_code_name(ErrorCode code);

/// All library failures surface as this exception; `code()` is stable and
/// machine-readable, `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

inline std::string shape_string(Eigen::Index rows, Eigen::Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

template <class Derived>
std::string shape_of(const Eigen::DenseBase<Derived>& m) {
  return shape_string(m.rows(), m.cols());
}

}  // namespace skelgraph

#endif  // SKELGRAPH_COMMON_HPP
