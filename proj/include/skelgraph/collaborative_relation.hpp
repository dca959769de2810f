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

// Cross-level collaborative relations between adjacent graph levels and the
// joint-resolution fusion of all three levels.

#ifndef SKELGRAPH_COLLABORATIVE_RELATION_HPP
#define SKELGRAPH_COLLABORATIVE_RELATION_HPP

#include "skelgraph/structural_relation.hpp"

namespace skelgraph {

inline constexpr double kDefaultFusion = 0.3;

/// Softmax over lower nodes of inner products with each upper node:
/// (B*n_upper) x n_lower. `lower_nodes` defaults to lower.rows() (one frame).
template <class T>
T collab_relations(const T& upper, const T& lower, int lower_nodes = -1) {
  require(upper.cols() == lower.cols(), ErrorCode::DimensionMismatch,
          "collaborative relations need equal feature widths, got " + std::to_string(upper.cols()) + " and " +
              std::to_string(lower.cols()));
  const int n = lower_nodes > 0 ? lower_nodes : static_cast<int>(lower.rows());
  return softmax_rows(block_gram(upper, lower, n));
}

/// Residual update: upper_i + sum_j A_ij W_c lower_j.
template <class T>
T collab_update(const T& upper, const T& lower, const T& relations, const T& weights) {
  require(weights.rows() == weights.cols() && weights.cols() == lower.cols(), ErrorCode::DimensionMismatch,
          "collaboration weights must be D1 x D1");
  return add(block_aggregate(relations, matmul_nt(lower, weights)), upper);
}

/// Replicates each node's feature row onto its member joints: (B*J) x D1.
template <class T>
T broadcast_to_joints(const T& features, const IndexList& joint_map, int node_count) {
  require(node_count > 0 && features.rows() % node_count == 0, ErrorCode::DimensionMismatch,
          "feature rows are not a whole number of frames");
  for (std::size_t j = 0; j < joint_map.size(); ++j)
    require(joint_map[j] >= 0 && joint_map[j] < node_count, ErrorCode::UncoveredJoint,
            "joint " + std::to_string(j) + " has no containing node");
  const Eigen::Index frames = features.rows() / node_count;
  IndexList rows;
  rows.reserve(static_cast<std::size_t>(frames) * joint_map.size());
  for (Eigen::Index b = 0; b < frames; ++b)
    for (int node : joint_map) rows.push_back(static_cast<int>(b) * node_count + node);
  return gather_rows(features, rows);
}

/// F1 + lambda * (F2 + F3)
template <class T>
T fuse_levels(const T& joint_level, const T& part_level, const T& body_level, scalar_of_t<T> lambda) {
  require(lambda >= 0, ErrorCode::InvalidConfig, "fusion coefficient must be non-negative");
  return add(joint_level, scale(add(part_level, body_level), lambda));
}

}  // namespace skelgraph

#endif  // SKELGRAPH_COLLABORATIVE_RELATION_HPP
