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

// Joint-, part- and body-level graphs of a single skeleton frame.

#ifndef SKELGRAPH_GRAPH_HPP
#define SKELGRAPH_GRAPH_HPP

#include "skelgraph/layout.hpp"

namespace skelgraph {

struct LevelGraph {
  int level = 1;
  MatrixXd node_positions;              // n_l x 3
  EdgeList edges;                       // undirected, a < b
  std::vector<IndexList> neighbor_sets;  // N_i, always contains i

  int node_count() const { return static_cast<int>(node_positions.rows()); }
};

/// Node i sits at the mean of its group's joints; edges come from `topology`.
LevelGraph build_level_graph(const MatrixXd& frame, const GroupingTable& table, const EdgeList& topology);

/// Convenience: level `level` of `layout` for `frame`.
LevelGraph build_level_graph(const MatrixXd& frame, const Layout& layout, int level);

/// mask(i, j) is true iff j is in N_i (self included).
BoolMatrix neighbor_mask(const LevelGraph& graph);
BoolMatrix neighbor_mask(int node_count, const EdgeList& edges);

/// n_l x J averaging matrix: node positions = pooling_matrix * joints.
MatrixXd pooling_matrix(const GroupingTable& table, int joint_count);

/// For each joint, the index of the level node that contains it.
IndexList joint_to_node(const GroupingTable& table, int joint_count);

/// Rows sum to 1 within `tolerance`, entries non-negative, exactly zero off the mask.
bool is_normalized_adjacency(const MatrixXd& adjacency, const BoolMatrix& mask, double tolerance = 1e-6);

}  // namespace skelgraph

#endif  // SKELGRAPH_GRAPH_HPP
