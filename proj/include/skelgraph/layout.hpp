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

#ifndef SKELGRAPH_LAYOUT_HPP
#define SKELGRAPH_LAYOUT_HPP

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "skelgraph/common.hpp"

namespace skelgraph {

inline constexpr int kLevels = 3;

using Edge = std::pair<int, int>;
using EdgeList = std::vector<Edge>;

/// Membership of level-l nodes in terms of joint indices. Member lists are
/// kept sorted so pooled positions do not depend on the order they were listed.
struct GroupingTable {
  int level = 1;
  std::vector<IndexList> groups;

  int node_count() const { return static_cast<int>(groups.size()); }
};

struct JointInfo {
  std::string name;
  Eigen::Vector3d rest;
};

/// A named, versioned skeleton layout: joints with a rest pose, the node
/// groupings of the three graph levels and each level's edge list.
struct Layout {
  std::string name;
  int version = 1;
  int reference_joint = 0;
  std::vector<JointInfo> joints;
  std::array<GroupingTable, kLevels> groupings;
  std::array<EdgeList, kLevels> edges;

  int joint_count() const { return static_cast<int>(joints.size()); }
  const GroupingTable& grouping(int level) const { return groupings.at(level - 1); }
  const EdgeList& level_edges(int level) const { return edges.at(level - 1); }
  int node_count(int level) const { return grouping(level).node_count(); }
  int joint_index(const std::string& joint_name) const;
};

/// Parses the three text tables of a layout and validates them.
Layout parse_layout(const std::string& joints_csv, const std::string& groups_csv, const std::string& edges_csv);

/// Loads `<dir>/<name>.{joints,groups,edges}.csv`.
Layout load_layout(const std::string& dir, const std::string& name);

/// Layouts compiled into the library from data/layouts.
const Layout& bundled_layout(const std::string& name);
std::vector<std::string> bundled_layout_names();

/// Edges of an upper level: nodes u, v are adjacent iff some member joint of u
/// shares a joint-level edge with some member joint of v.
EdgeList derive_group_edges(const EdgeList& joint_edges, const GroupingTable& table, int joint_count);

/// Throws unless the table's groups are disjoint and cover all joints.
void validate_grouping(const GroupingTable& table, int joint_count);

bool is_connected(int node_count, const EdgeList& edges);

}  // namespace skelgraph

#endif  // SKELGRAPH_LAYOUT_HPP
