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

// Multi-head structural relation layer: masked graph attention over the
// anatomical neighbours of each node, averaged over heads.
//
// Every function is templated on the matrix type T, which is either a dense
// Mat<S> (plain evaluation) or a Var<S> (recorded for reverse mode). Node
// inputs may hold a batch of B frames stacked as (B*n) rows.

#ifndef SKELGRAPH_STRUCTURAL_RELATION_HPP
#define SKELGRAPH_STRUCTURAL_RELATION_HPP

#include <vector>

#include "skelgraph/autodiff.hpp"

namespace skelgraph {

template <class T>
using scalar_of_t = typename T::Scalar;

inline constexpr double kRelationSlope = 0.2;

template <class T>
struct RelationHead {
  T feature_map;  // D1 x D, maps node coordinates into feature space
  T relation;     // 2*D1 x 1, scores a concatenated (source, neighbour) pair
};

template <class T>
struct MsrlOutput {
  T features;                // (B*n) x D1, head average
  std::vector<T> adjacency;  // per head, (B*n) x n
};

/// Single-pair relation score: LeakyReLU(w_r . [W_v v_i || W_v v_j]).
template <class S>
S relation_logit(const RelationHead<Mat<S>>& head, const Vec<S>& v_i, const Vec<S>& v_j,
                 S slope = S(kRelationSlope)) {
  const Eigen::Index d1 = head.feature_map.rows();
  require(v_i.size() == head.feature_map.cols() && v_j.size() == head.feature_map.cols(), ErrorCode::DimensionMismatch,
          "node vectors must match the feature map input dimension");
  require(head.relation.rows() == 2 * d1 && head.relation.cols() == 1, ErrorCode::DimensionMismatch,
          "relation weights must be 2*D1 x 1");
  Vec<S> joined(2 * d1);
  joined << head.feature_map * v_i, head.feature_map * v_j;
  const S pre = head.relation.col(0).dot(joined);
  return pre > S(0) ? pre : slope * pre;
}

/// All pairwise scores of every frame: (B*n) x n, row (b,i) column j.
template <class T>
T relation_logits(const RelationHead<T>& head, const T& nodes, int node_count,
                  scalar_of_t<T> slope = scalar_of_t<T>(kRelationSlope)) {
  const int d1 = static_cast<int>(head.feature_map.rows());
  require(head.relation.rows() == 2 * d1 && head.relation.cols() == 1, ErrorCode::DimensionMismatch,
          "relation weights must be 2*D1 x 1");
  const T mapped = matmul_nt(nodes, head.feature_map);
  const T source = matmul(mapped, row_block(head.relation, 0, d1));
  const T target = matmul(mapped, row_block(head.relation, d1, d1));
  return leaky_relu(outer_sum(source, target, node_count), slope);
}

/// Softmax of each row's scores over the node's neighbour set.
template <class T>
T normalize_relations(const T& logits, const BoolMatrix& mask) {
  return masked_softmax_rows(logits, mask);
}

/// ELU of the relation-weighted sum of mapped neighbour features.
template <class T>
T aggregate_head(const RelationHead<T>& head, const T& adjacency, const T& nodes) {
  return elu(block_aggregate(adjacency, matmul_nt(nodes, head.feature_map)));
}

template <class T>
MsrlOutput<T> msrl_forward(const std::vector<RelationHead<T>>& heads, const T& nodes, const BoolMatrix& mask,
                           scalar_of_t<T> slope = scalar_of_t<T>(kRelationSlope)) {
  require(!heads.empty(), ErrorCode::InvalidConfig, "MSRL needs at least one head");
  const int n = static_cast<int>(mask.rows());
  MsrlOutput<T> out;
  std::vector<T> per_head;
  for (const auto& head : heads) {
    require(head.feature_map.rows() == heads.front().feature_map.rows(), ErrorCode::DimensionMismatch,
            "all heads must share D1");
    T adjacency = normalize_relations(relation_logits(head, nodes, n, slope), mask);
    per_head.push_back(aggregate_head(head, adjacency, nodes));
    out.adjacency.push_back(std::move(adjacency));
  }
  out.features = mean_of(per_head);
  return out;
}

}  // namespace skelgraph

#endif  // SKELGRAPH_STRUCTURAL_RELATION_HPP
