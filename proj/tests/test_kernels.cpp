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

#include <cmath>

#include "doctest.h"
#include "test_support.hpp"

using namespace skelgraph;
using skelgraph::testing::max_abs_diff;
using skelgraph::testing::random_matrix;

TEST_CASE("matmul and elementwise shapes are checked") {
  const MatrixXd a = MatrixXd::Ones(2, 3);
  const MatrixXd b = MatrixXd::Ones(2, 3);
  CHECK_THROWS_AS(matmul(a, b), Error);
  CHECK(matmul_nt(a, b).isApprox(MatrixXd::Constant(2, 2, 3.0)));
  CHECK_THROWS_AS(add(a, MatrixXd(3, 2)), Error);
  CHECK_THROWS_AS(add_bias(a, MatrixXd(MatrixXd::Ones(1, 2))), Error);
}

TEST_CASE("activations match their scalar definitions") {
  Rng rng(3);
  const MatrixXd x = random_matrix(rng, 5, 7, 4.0);
  const MatrixXd lr = leaky_relu(x, 0.2);
  const MatrixXd e = elu(x);
  const MatrixXd s = sigmoid(x);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      CHECK(lr(i, j) == doctest::Approx(testing::oracle::leaky(x(i, j), 0.2)).epsilon(1e-15));
      CHECK(e(i, j) == doctest::Approx(testing::oracle::elu(x(i, j))).epsilon(1e-14));
      CHECK(s(i, j) == doctest::Approx(testing::oracle::logistic(x(i, j))).epsilon(1e-14));
    }
  CHECK(detail::positive_step(MatrixXd(MatrixXd::Zero(1, 1)))(0, 0) == 0.0);
}

TEST_CASE("masked softmax is exactly zero off the mask and stable for large logits") {
  BoolMatrix mask(2, 2);
  mask << true, false, true, true;
  MatrixXd logits(4, 2);
  logits << 1000, 5, 0.5, 0.5, -1000, 3, 800, 800;
  const MatrixXd y = masked_softmax_rows(logits, mask);
  CHECK(y(0, 0) == 1.0);
  CHECK(y(0, 1) == 0.0);
  CHECK(y(1, 0) == doctest::Approx(0.5));
  CHECK(y(2, 1) == 0.0);  // row 2 uses mask row 0
  CHECK(y(3, 0) == doctest::Approx(0.5));
  CHECK(y.allFinite());
}

TEST_CASE("block kernels match per-frame loops") {
  Rng rng(9);
  const int frames = 3, n = 4, c = 5, d = 2;
  const MatrixXd w = random_matrix(rng, frames * n, c);
  const MatrixXd v = random_matrix(rng, frames * c, d);
  const MatrixXd agg = block_aggregate(w, v);
  const MatrixXd u = random_matrix(rng, frames * n, d);
  const MatrixXd gram = block_gram(u, v, c);
  const MatrixXd pool = random_matrix(rng, n, c);
  const MatrixXd pooled = block_pool(pool, v);
  const MatrixXd a = random_matrix(rng, frames * n, 1);
  const MatrixXd b = random_matrix(rng, frames * n, 1);
  const MatrixXd outer = outer_sum(a, b, n);
  for (int f = 0; f < frames; ++f) {
    const MatrixXd wf = w.middleRows(f * n, n), vf = v.middleRows(f * c, c), uf = u.middleRows(f * n, n);
    CHECK(max_abs_diff(agg.middleRows(f * n, n), wf * vf) < 1e-12);
    CHECK(max_abs_diff(gram.middleRows(f * n, n), uf * vf.transpose()) < 1e-12);
    CHECK(max_abs_diff(pooled.middleRows(f * n, n), pool * vf) < 1e-12);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) CHECK(outer(f * n + i, j) == a(f * n + i, 0) + b(f * n + j, 0));
  }
}

TEST_CASE("reshape and gather keep row-major order") {
  MatrixXd x(4, 2);
  x << 1, 2, 3, 4, 5, 6, 7, 8;
  MatrixXd expected(2, 4);
  expected << 1, 2, 3, 4, 5, 6, 7, 8;
  CHECK(reshape_rows(x, 2) == expected);
  const MatrixXd g = gather_rows(x, {3, 0, 3});
  CHECK(g.row(0) == x.row(3));
  CHECK(g.row(1) == x.row(0));
  CHECK(g.rows() == 3);
}

TEST_CASE("row softmax sums to one") {
  Rng rng(4);
  const MatrixXd y = softmax_rows(random_matrix(rng, 6, 5, 30.0));
  for (Eigen::Index i = 0; i < y.rows(); ++i) CHECK(y.row(i).sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("scalar reductions") {
  MatrixXd x(2, 2);
  x << 1, -2, 3, 4;
  CHECK(scalar_value(sum_all(x)) == 6.0);
  CHECK(scalar_value(squared_norm(x)) == 30.0);
  CHECK(pick(x, {1, 0})(0, 0) == -2.0);
  CHECK(pick(x, {1, 0})(1, 0) == 3.0);
  CHECK_THROWS_AS(scalar_value(x), Error);
}
