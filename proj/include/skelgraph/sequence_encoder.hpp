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

// Stacked LSTM over per-frame graph representations.

#ifndef SKELGRAPH_SEQUENCE_ENCODER_HPP
#define SKELGRAPH_SEQUENCE_ENCODER_HPP

#include <optional>
#include <vector>

#include "skelgraph/structural_relation.hpp"

namespace skelgraph {

inline constexpr double kForgetBias = 1.0;

/// Gate blocks are laid out [input | forget | candidate | output], each H wide.
template <class T>
struct LstmLayer {
  T input_weights;      // in x 4H
  T recurrent_weights;  // H x 4H
  T bias;               // 1 x 4H
};

template <class T>
struct LstmState {
  T hidden;  // B x H
  T cell;    // B x H
};

/// One step of a standard (peephole-free) LSTM cell. Without a previous state
/// the cell starts from zero, so the recurrent and forget paths drop out.
template <class T>
LstmState<T> lstm_step(const LstmLayer<T>& layer, const T& input, const std::optional<LstmState<T>>& previous) {
  const int h = static_cast<int>(layer.recurrent_weights.rows());
  require(layer.recurrent_weights.cols() == 4 * h && layer.input_weights.cols() == 4 * h &&
              layer.bias.cols() == 4 * h && layer.bias.rows() == 1,
          ErrorCode::DimensionMismatch, "LSTM weights must have 4H columns");
  T gates = matmul(input, layer.input_weights);
  if (previous) gates = add(gates, matmul(previous->hidden, layer.recurrent_weights));
  gates = add_bias(gates, layer.bias);
  const T in_gate = sigmoid(col_block(gates, 0, h));
  const T candidate = tanh(col_block(gates, 2 * h, h));
  const T out_gate = sigmoid(col_block(gates, 3 * h, h));
  T cell = hadamard(in_gate, candidate);
  if (previous) cell = add(cell, hadamard(sigmoid(col_block(gates, h, h)), previous->cell));
  T hidden = hadamard(out_gate, tanh(cell));
  return {std::move(hidden), std::move(cell)};
}

/// Runs every layer over the inputs (one B x in matrix per time step) and
/// returns the top layer's hidden state at each step.
template <class T>
std::vector<T> encode_sequence(const std::vector<LstmLayer<T>>& layers, const std::vector<T>& inputs) {
  require(!layers.empty(), ErrorCode::InvalidConfig, "LSTM needs at least one layer");
  require(!inputs.empty(), ErrorCode::InvalidLength, "cannot encode an empty sequence");
  std::vector<T> current = inputs;
  for (const auto& layer : layers) {
    std::vector<T> next;
    std::optional<LstmState<T>> state;
    for (const T& x : current) {
      require(x.cols() == layer.input_weights.rows(), ErrorCode::DimensionMismatch,
              "LSTM input width " + std::to_string(x.cols()) + " != " + std::to_string(layer.input_weights.rows()));
      state = lstm_step(layer, x, state);
      next.push_back(state->hidden);
    }
    current = std::move(next);
  }
  return current;
}

}  // namespace skelgraph

#endif  // SKELGRAPH_SEQUENCE_ENCODER_HPP
