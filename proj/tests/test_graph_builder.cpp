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

#include <algorithm>

#include "doctest.h"
#include "test_support.hpp"

using namespace skelgraph;

TEST_CASE("bundled layouts have the expected level sizes") {
  const Layout& k20 = bundled_layout("kinect20");
  CHECK(k20.joint_count() == 20);
  CHECK(k20.node_count(1) == 20);
  CHECK(k20.node_count(2) == 10);
  CHECK(k20.node_count(3) == 5);
  CHECK(bundled_layout("kinect25").joint_count() == 25);
  CHECK(bundled_layout("tiny6").node_count(3) == 2);
  CHECK_THROWS_AS(bundled_layout("nope"), Error);
}

TEST_CASE("shipped coarse edges follow from the joint edges") {
  for (const std::string& name : bundled_layout_names()) {
    INFO(name);
    const Layout& layout = bundled_layout(name);
    for (int level = 1; level <= kLevels; ++level) {
      validate_grouping(layout.grouping(level), layout.joint_count());
      CHECK(is_connected(layout.node_count(level), layout.level_edges(level)));
      if (level == 1) continue;
      EdgeList shipped = layout.level_edges(level);
      EdgeList derived = derive_group_edges(layout.level_edges(1), layout.grouping(level), layout.joint_count());
      std::sort(shipped.begin(), shipped.end());
      std::sort(derived.begin(), derived.end());
      CHECK(shipped == derived);
    }
  }
}

TEST_CASE("node positions are group means") {
  GroupingTable table{2, {{0, 1}, {2}}};
  MatrixXd frame(3, 3);
  frame << 0, 0, 0, 2, 4, 6, 1, 1, 1;
  const LevelGraph g = build_level_graph(frame, table, {{0, 1}});
  CHECK(g.node_positions(0, 0) == 1.0);
  CHECK(g.node_positions(0, 1) == 2.0);
  CHECK(g.node_positions(0, 2) == 3.0);
  CHECK(g.node_positions.row(1) == frame.row(2));

  GroupingTable whole{3, {{0, 1, 2}}};
  const LevelGraph single = build_level_graph(frame, whole, {});
  CHECK(single.node_count() == 1);
  CHECK(neighbor_mask(single)(0, 0));
}

TEST_CASE("grouping must cover each joint once") {
  CHECK_THROWS_AS(validate_grouping(GroupingTable{2, {{0}, {2}}}, 3), Error);
  CHECK_THROWS_AS(validate_grouping(GroupingTable{2, {{0, 1}, {1, 2}}}, 3), Error);
  MatrixXd frame = MatrixXd::Zero(4, 3);
  CHECK_THROWS_AS(build_level_graph(frame, bundled_layout("tiny6"), 1), Error);
}

TEST_CASE("neighbour masks include self loops and edges only") {
  const BoolMatrix two = neighbor_mask(2, {{0, 1}});
  CHECK(two.count() == 4);
  const BoolMatrix path = neighbor_mask(3, {{0, 1}, {1, 2}});
  BoolMatrix expected(3, 3);
  expected << true, true, false, true, true, true, false, true, true;
  CHECK(path == expected);

  const Layout& k20 = bundled_layout("kinect20");
  for (int level = 1; level <= kLevels; ++level) {
    const int n = k20.node_count(level);
    const BoolMatrix mask = neighbor_mask(n, k20.level_edges(level));
    std::vector<int> degree(n, 0);
    for (const auto& [a, b] : k20.level_edges(level)) ++degree[a], ++degree[b];
    for (int i = 0; i < n; ++i) {
      CHECK(mask.row(i).count() == degree[i] + 1);
      CHECK(mask(i, i));
    }
    CHECK(mask == mask.transpose());
  }
}

TEST_CASE("relabelling nodes permutes the mask") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(8));
    const EdgeList edges = testing::random_connected_edges(rng, n, 3);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(static_cast<std::uint64_t>(i + 1))]);
    EdgeList relabelled;
    for (const auto& [a, b] : edges) relabelled.push_back({std::min(perm[a], perm[b]), std::max(perm[a], perm[b])});
    const BoolMatrix m = neighbor_mask(n, edges);
    const BoolMatrix p = neighbor_mask(n, relabelled);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) CHECK(m(i, j) == p(perm[i], perm[j]));
  }
}

TEST_CASE("pooling matrix and joint map agree with the grouping") {
  const Layout& k20 = bundled_layout("kinect20");
  for (int level = 1; level <= kLevels; ++level) {
    const MatrixXd pool = pooling_matrix(k20.grouping(level), 20);
    const IndexList owner = joint_to_node(k20.grouping(level), 20);
    for (Eigen::Index i = 0; i < pool.rows(); ++i) CHECK(pool.row(i).sum() == doctest::Approx(1.0));
    for (int j = 0; j < 20; ++j) CHECK(pool(owner[j], j) > 0);
    Rng rng(level);
    const MatrixXd frame = testing::random_matrix(rng, 20, 3);
    CHECK(testing::max_abs_diff(pool * frame, build_level_graph(frame, k20, level).node_positions) < 1e-12);
  }
}

TEST_CASE("group member order does not change the graph") {
  Rng rng(2);
  const MatrixXd frame = testing::random_matrix(rng, 4, 3);
  const LevelGraph a = build_level_graph(frame, GroupingTable{2, {{0, 3}, {1, 2}}}, {{0, 1}});
  const LevelGraph b = build_level_graph(frame, GroupingTable{2, {{3, 0}, {2, 1}}}, {{0, 1}});
  CHECK(testing::max_abs_diff(a.node_positions, b.node_positions) < 1e-15);
}

TEST_CASE("adjacency normalization check") {
  const BoolMatrix mask = neighbor_mask(3, {{0, 1}, {1, 2}});
  MatrixXd a(3, 3);
  a << 0.5, 0.5, 0, 0.2, 0.3, 0.5, 0, 0.4, 0.6;
  CHECK(is_normalized_adjacency(a, mask));
  a(0, 2) = 0.1;
  CHECK_FALSE(is_normalized_adjacency(a, mask));
}
