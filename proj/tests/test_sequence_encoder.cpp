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

#include "doctest.h"
#include "test_support.hpp"

using namespace skelgraph;
using testing::max_abs_diff;
using testing::random_matrix;

namespace {

LstmLayer<MatrixXd> random_layer(Rng& rng, int in, int h) {
  return {random_matrix(rng, in, 4 * h, 0.6), random_matrix(rng, h, 4 * h, 0.6), random_matrix(rng, 1, 4 * h, 0.6)};
}

}  // namespace

TEST_CASE("zero weights and inputs stay at zero") {
  const LstmLayer<MatrixXd> layer{MatrixXd::Zero(3, 8), MatrixXd::Zero(2, 8), MatrixXd::Zero(1, 8)};
  std::vector<MatrixXd> inputs(4, MatrixXd::Zero(1, 3));
  for (const MatrixXd& h : encode_sequence<MatrixXd>({layer, {MatrixXd::Zero(2, 8), MatrixXd::Zero(2, 8), MatrixXd::Zero(1, 8)}}, inputs))
    CHECK(h.isZero(0));
}

TEST_CASE("the first step has no recurrent or forget term") {
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const auto layer = random_layer(rng, 5, 3);
    const MatrixXd x = random_matrix(rng, 2, 5);
    const auto state = lstm_step<MatrixXd>(layer, x, std::nullopt);
    const MatrixXd gates = add_bias(matmul(x, layer.input_weights), layer.bias);
    const MatrixXd c = hadamard(sigmoid(col_block(gates, 0, 3)), tanh(col_block(gates, 6, 3)));
    const MatrixXd h = hadamard(sigmoid(col_block(gates, 9, 3)), tanh(c));
    CHECK(state.cell == c);
    CHECK(state.hidden == h);
    const auto one = encode_sequence<MatrixXd>({layer}, {x});
    CHECK(one[0] == h);
  }
}

TEST_CASE("stacked unroll matches the per-unit oracle") {
  Rng rng(62);
  for (int seed = 0; seed < 100; ++seed) {
    const int in = 1 + static_cast<int>(rng.below(6)), h = 1 + static_cast<int>(rng.below(5));
    const int steps = 1 + static_cast<int>(rng.below(5)), batch = 1 + static_cast<int>(rng.below(3));
    const std::vector<LstmLayer<MatrixXd>> layers = {random_layer(rng, in, h), random_layer(rng, h, h)};
    std::vector<MatrixXd> inputs;
    for (int t = 0; t < steps; ++t) inputs.push_back(random_matrix(rng, batch, in));
    const auto states = encode_sequence(layers, inputs);
    for (int b = 0; b < batch; ++b) {
      std::vector<VectorXd> seq;
      for (const auto& x : inputs) seq.push_back(x.row(b).transpose());
      const auto ref = testing::oracle::lstm(layers, seq);
      for (int t = 0; t < steps; ++t) CHECK((states[t].row(b).transpose() - ref[t]).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("states are causal and bounded") {
  Rng rng(63);
  const std::vector<LstmLayer<MatrixXd>> layers = {random_layer(rng, 4, 3), random_layer(rng, 3, 3)};
  std::vector<MatrixXd> inputs;
  for (int t = 0; t < 5; ++t) inputs.push_back(random_matrix(rng, 1, 4, 5.0));
  const auto full = encode_sequence(layers, inputs);
  auto changed = inputs;
  changed[3] = random_matrix(rng, 1, 4);
  const auto other = encode_sequence(layers, changed);
  for (int t = 0; t < 3; ++t) CHECK(full[t] == other[t]);
  CHECK(full[3] != other[3]);
  const auto prefix = encode_sequence(layers, std::vector<MatrixXd>(inputs.begin(), inputs.begin() + 2));
  CHECK(prefix[1] == full[1]);
  for (const auto& h : full) CHECK(h.cwiseAbs().maxCoeff() < 1.0);
  CHECK_THROWS_AS(encode_sequence(layers, std::vector<MatrixXd>{}), Error);
}

TEST_CASE("unroll gradients against finite differences") {
  Rng rng(64);
  const auto l0 = random_layer(rng, 3, 2), l1 = random_layer(rng, 2, 2);
  const std::vector<MatrixXd> in = {l0.input_weights, l0.recurrent_weights, l0.bias, l1.input_weights,
                                    l1.recurrent_weights, l1.bias, random_matrix(rng, 2, 3), random_matrix(rng, 2, 3),
                                    random_matrix(rng, 2, 3)};
  const auto report = testing::check_gradients(
      [](const auto& a) {
        using T = std::decay_t<decltype(a[0])>;
        const std::vector<LstmLayer<T>> layers = {{a[0], a[1], a[2]}, {a[3], a[4], a[5]}};
        const auto states = encode_sequence(layers, std::vector<T>{a[6], a[7], a[8]});
        return add(squared_norm(states[2]), sum_all(states[0]));
      },
      in);
  CHECK(report.passed);
  CHECK(report.max_relative_error < 1e-5);
}
