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

#include "skelgraph/graph.hpp"

#include <cmath>

namespace skelgraph {

namespace {

int covered_joints(const GroupingTable& table) {
  int count = 0;
  for (const auto& group : table.groups) count += static_cast<int>(group.size());
  return count;
}

}  // namespace

LevelGraph build_level_graph(const MatrixXd& frame, const GroupingTable& table, const EdgeList& topology) {
  const int joints = static_cast<int>(frame.rows());
  require(frame.cols() == kJointDim, ErrorCode::DimensionMismatch, "frame must be J x 3, got " + shape_of(frame));
  require(covered_joints(table) == joints, ErrorCode::LayoutMismatch,
          "frame has " + std::to_string(joints) + " joints but the level-" + std::to_string(table.level) +
              " table covers " + std::to_string(covered_joints(table)));
  validate_grouping(table, joints);

  LevelGraph graph;
  graph.level = table.level;
  const int n = table.node_count();
  graph.node_positions.resize(n, kJointDim);
  for (int node = 0; node < n; ++node) {
    Eigen::RowVector3d sum = Eigen::RowVector3d::Zero();
    for (int joint : table.groups[node]) sum += frame.row(joint);
    graph.node_positions.row(node) = sum / static_cast<double>(table.groups[node].size());
  }
  for (const auto& [a, b] : topology)
    require(a >= 0 && a < n && b >= 0 && b < n && a != b, ErrorCode::LayoutMismatch, "edge references invalid node");
  require(is_connected(n, topology), ErrorCode::LayoutMismatch, "level graph is not connected");
  graph.edges = topology;
  graph.neighbor_sets.assign(n, IndexList{});
  const BoolMatrix mask = neighbor_mask(n, topology);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (mask(i, j)) graph.neighbor_sets[i].push_back(j);
  return graph;
}

LevelGraph build_level_graph(const MatrixXd& frame, const Layout& layout, int level) {
  require(frame.rows() == layout.joint_count(), ErrorCode::LayoutMismatch,
          "frame has " + std::to_string(frame.rows()) + " joints, layout " + layout.name + " expects " +
              std::to_string(layout.joint_count()));
  return build_level_graph(frame, layout.grouping(level), layout.level_edges(level));
}

BoolMatrix neighbor_mask(int node_count, const EdgeList& edges) {
  BoolMatrix mask = BoolMatrix::Constant(node_count, node_count, false);
  for (int i = 0; i < node_count; ++i) mask(i, i) = true;
  for (const auto& [a, b] : edges) {
    require(a >= 0 && a < node_count && b >= 0 && b < node_count, ErrorCode::IndexOutOfRange,
            "edge outside node range");
    mask(a, b) = true;
    mask(b, a) = true;
  }
  return mask;
}

BoolMatrix neighbor_mask(const LevelGraph& graph) { return neighbor_mask(graph.node_count(), graph.edges); }

MatrixXd pooling_matrix(const GroupingTable& table, int joint_count) {
  validate_grouping(table, joint_count);
  MatrixXd pool = MatrixXd::Zero(table.node_count(), joint_count);
  for (int node = 0; node < table.node_count(); ++node)
    for (int joint : table.groups[node]) pool(node, joint) = 1.0 / static_cast<double>(table.groups[node].size());
  return pool;
}

IndexList joint_to_node(const GroupingTable& table, int joint_count) {
  IndexList owner(joint_count, -1);
  for (int node = 0; node < table.node_count(); ++node)
    for (int joint : table.groups[node]) {
      require(joint >= 0 && joint < joint_count, ErrorCode::IndexOutOfRange, "group member outside joint range");
      owner[joint] = node;
    }
  for (int joint = 0; joint < joint_count; ++joint)
    require(owner[joint] >= 0, ErrorCode::UncoveredJoint, "joint " + std::to_string(joint) + " has no containing node");
  return owner;
}

bool is_normalized_adjacency(const MatrixXd& adjacency, const BoolMatrix& mask, double tolerance) {
  const Eigen::Index n = mask.rows();
  if (adjacency.cols() != n || adjacency.rows() % n != 0) return false;
  for (Eigen::Index r = 0; r < adjacency.rows(); ++r) {
    double total = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = adjacency(r, j);
      if (!mask(r % n, j) && w != 0.0) return false;
      if (w < 0.0 || !std::isfinite(w)) return false;
      total += w;
    }
    if (std::abs(total - 1.0) > tolerance) return false;
  }
  return true;
}

}  // namespace skelgraph
