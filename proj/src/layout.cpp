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

#include "skelgraph/layout.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "skelgraph/text.hpp"

namespace skelgraph {

namespace detail {

struct BundledLayoutText {
  const char* name;
  const char* joints;
  const char* groups;
  const char* edges;
};

// Generated at configure time from data/layouts.
extern const BundledLayoutText kBundledLayouts[];
extern const int kBundledLayoutCount;

}  // namespace detail

namespace {

int parse_index(const std::string& field, const std::string& context) {
  return text::to_int(field, context);
}

}  // namespace

int Layout::joint_index(const std::string& joint_name) const {
  for (std::size_t j = 0; j < joints.size(); ++j)
    if (joints[j].name == joint_name) return static_cast<int>(j);
  throw Error(ErrorCode::IndexOutOfRange, "layout " + name + " has no joint named " + joint_name);
}

void validate_grouping(const GroupingTable& table, int joint_count) {
  std::vector<int> owner(joint_count, -1);
  for (int node = 0; node < table.node_count(); ++node) {
    require(!table.groups[node].empty(), ErrorCode::LayoutMismatch,
            "level " + std::to_string(table.level) + " node " + std::to_string(node) + " has no member joints");
    for (int joint : table.groups[node]) {
      require(joint >= 0 && joint < joint_count, ErrorCode::LayoutMismatch,
              "level " + std::to_string(table.level) + " references joint " + std::to_string(joint) + " outside 0.." +
                  std::to_string(joint_count - 1));
      require(owner[joint] < 0, ErrorCode::LayoutMismatch,
              "joint " + std::to_string(joint) + " belongs to two level-" + std::to_string(table.level) + " nodes");
      owner[joint] = node;
    }
  }
  for (int joint = 0; joint < joint_count; ++joint)
    require(owner[joint] >= 0, ErrorCode::UncoveredJoint,
            "joint " + std::to_string(joint) + " is not covered at level " + std::to_string(table.level));
}

bool is_connected(int node_count, const EdgeList& edges) {
  if (node_count <= 1) return true;
  std::vector<IndexList> adjacent(node_count);
  for (const auto& [a, b] : edges) {
    adjacent[a].push_back(b);
    adjacent[b].push_back(a);
  }
  std::vector<bool> seen(node_count, false);
  IndexList stack{0};
  seen[0] = true;
  int reached = 1;
  while (!stack.empty()) {
    const int node = stack.back();
    stack.pop_back();
    for (int next : adjacent[node]) {
      if (seen[next]) continue;
      seen[next] = true;
      ++reached;
      stack.push_back(next);
    }
  }
  return reached == node_count;
}

EdgeList derive_group_edges(const EdgeList& joint_edges, const GroupingTable& table, int joint_count) {
  validate_grouping(table, joint_count);
  std::vector<int> owner(joint_count);
  for (int node = 0; node < table.node_count(); ++node)
    for (int joint : table.groups[node]) owner[joint] = node;
  std::set<Edge> unique;
  for (const auto& [a, b] : joint_edges) {
    const int u = owner[a], v = owner[b];
    if (u != v) unique.insert({std::min(u, v), std::max(u, v)});
  }
  return EdgeList(unique.begin(), unique.end());
}

Layout parse_layout(const std::string& joints_csv, const std::string& groups_csv, const std::string& edges_csv) {
  Layout layout;
  bool named = false;
  for (const auto& row : text::csv_rows(joints_csv)) {
    if (row[0] == "layout") {
      require(row.size() >= 3, ErrorCode::ParseError, "layout row needs name and version");
      layout.name = row[1];
      layout.version = parse_index(row[2], "layout version");
      named = true;
    } else if (row[0] == "reference_joint") {
      require(row.size() == 2, ErrorCode::ParseError, "reference_joint row needs one value");
      layout.reference_joint = parse_index(row[1], "reference_joint");
    } else if (row[0] == "index") {
      continue;
    } else {
      require(row.size() == 5, ErrorCode::ParseError, "joint row needs index,name,x,y,z");
      const int index = parse_index(row[0], "joint index");
      require(index == layout.joint_count(), ErrorCode::ParseError, "joint rows must be listed in index order");
      layout.joints.push_back({row[1], Eigen::Vector3d(text::to_double(row[2], "x"), text::to_double(row[3], "y"),
                                                       text::to_double(row[4], "z"))});
    }
  }
  require(named, ErrorCode::ParseError, "joints table lacks a layout row");
  const int joint_count = layout.joint_count();
  require(joint_count > 0, ErrorCode::ParseError, "layout " + layout.name + " has no joints");
  require(layout.reference_joint >= 0 && layout.reference_joint < joint_count, ErrorCode::IndexOutOfRange,
          "reference joint outside layout");

  for (int level = 1; level <= kLevels; ++level) layout.groupings[level - 1].level = level;
  for (const auto& row : text::csv_rows(groups_csv)) {
    if (row[0] == "level") continue;
    require(row.size() == 3, ErrorCode::ParseError, "group row needs level,node_index,member_joint_indices");
    const int level = parse_index(row[0], "group level");
    require(level >= 1 && level <= kLevels, ErrorCode::ParseError, "group level must be 1..3");
    const int node = parse_index(row[1], "group node index");
    auto& groups = layout.groupings[level - 1].groups;
    require(node == static_cast<int>(groups.size()), ErrorCode::ParseError, "group rows must be listed in node order");
    IndexList members;
    std::istringstream in(row[2]);
    std::string token;
    while (in >> token) members.push_back(parse_index(token, "member joint"));
    std::sort(members.begin(), members.end());
    groups.push_back(std::move(members));
  }
  for (int level = 1; level <= kLevels; ++level) validate_grouping(layout.grouping(level), joint_count);
  for (int node = 0; node < joint_count; ++node)
    require(layout.grouping(1).groups[node] == IndexList{node}, ErrorCode::LayoutMismatch,
            "level-1 groups must be the singleton joints in order");

  for (const auto& row : text::csv_rows(edges_csv)) {
    if (row[0] == "level") continue;
    require(row.size() == 3, ErrorCode::ParseError, "edge row needs level,node_a,node_b");
    const int level = parse_index(row[0], "edge level");
    require(level >= 1 && level <= kLevels, ErrorCode::ParseError, "edge level must be 1..3");
    const int a = parse_index(row[1], "edge node"), b = parse_index(row[2], "edge node");
    const int n = layout.node_count(level);
    require(a >= 0 && a < n && b >= 0 && b < n && a != b, ErrorCode::LayoutMismatch,
            "edge (" + row[1] + "," + row[2] + ") invalid at level " + row[0]);
    layout.edges[level - 1].push_back({std::min(a, b), std::max(a, b)});
  }
  for (int level = 1; level <= kLevels; ++level) {
    auto& list = layout.edges[level - 1];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    require(is_connected(layout.node_count(level), list), ErrorCode::LayoutMismatch,
            "level-" + std::to_string(level) + " graph of layout " + layout.name + " is not connected");
  }
  return layout;
}

Layout load_layout(const std::string& dir, const std::string& name) {
  const std::string base = dir + "/" + name;
  return parse_layout(text::read_file(base + ".joints.csv"), text::read_file(base + ".groups.csv"),
                      text::read_file(base + ".edges.csv"));
}

const Layout& bundled_layout(const std::string& name) {
  static std::mutex guard;
  static std::map<std::string, Layout> cache;
  std::lock_guard<std::mutex> lock(guard);
  if (auto it = cache.find(name); it != cache.end()) return it->second;
  for (int k = 0; k < detail::kBundledLayoutCount; ++k) {
    const auto& entry = detail::kBundledLayouts[k];
    if (name != entry.name) continue;
    return cache.emplace(name, parse_layout(entry.joints, entry.groups, entry.edges)).first->second;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown layout '" + name + "'");
}

std::vector<std::string> bundled_layout_names() {
  std::vector<std::string> names;
  for (int k = 0; k < detail::kBundledLayoutCount; ++k) names.emplace_back(detail::kBundledLayouts[k].name);
  return names;
}

}  // namespace skelgraph
