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

// Sparse sequential prediction: predict future skeletons from randomly
// sampled ordered subsequences of each training window.

#ifndef SKELGRAPH_SSP_HPP
#define SKELGRAPH_SSP_HPP

#include <cstdint>
#include <vector>

#include "skelgraph/random.hpp"
#include "skelgraph/sequence_encoder.hpp"

namespace skelgraph {

/// A strictly increasing subsequence of frame numbers x_1 < ... < x_k with
/// j <= x_j <= f-1. Frame numbers are 1-based, so the predicted frame
/// x_k + 1 always exists.
struct SparseSample {
  IndexList indices;

  int length() const { return static_cast<int>(indices.size()); }
  int target_index() const { return indices.back() + 1; }
};

/// Frame number that encoded state t (0-based) must predict: the next
/// sampled frame, or x_k + 1 for the last state.
inline int prediction_target(const SparseSample& sample, int t) {
  return t + 1 < sample.length() ? sample.indices[t + 1] : sample.target_index();
}

/// One sample for each k in 1..f-1, each uniform over the k-subsets of {1..f-1}.
std::vector<SparseSample> sample_subsequences(int frames, Rng& rng);
std::vector<SparseSample> sample_subsequences(int frames, std::uint64_t seed);

/// Two-layer perceptron with a ReLU hidden layer.
template <class T>
struct Mlp {
  T hidden_weights;  // in x hidden
  T hidden_bias;     // 1 x hidden
  T output_weights;  // hidden x out
  T output_bias;     // 1 x out
};

template <class T>
T mlp_forward(const Mlp<T>& mlp, const T& input) {
  const T hidden = relu(add_bias(matmul(input, mlp.hidden_weights), mlp.hidden_bias));
  return add_bias(matmul(hidden, mlp.output_weights), mlp.output_bias);
}

/// Predicted next skeleton for each row of `state` (B x D2): B x (J*3),
/// each row a row-major J x 3 skeleton.
template <class T>
T predict_next(const Mlp<T>& head, const T& state) {
  require(state.cols() == head.hidden_weights.rows(), ErrorCode::DimensionMismatch,
          "encoded state width " + std::to_string(state.cols()) + " != " + std::to_string(head.hidden_weights.rows()));
  return mlp_forward(head, state);
}

/// Reshapes a 1 x (J*3) prediction row to J x 3.
inline MatrixXd as_skeleton(const MatrixXd& row) {
  require(row.rows() == 1 && row.cols() % kJointDim == 0, ErrorCode::DimensionMismatch, "not a flattened skeleton");
  const Eigen::Index joints = row.cols() / kJointDim;
  MatrixXd skeleton(joints, kJointDim);
  for (Eigen::Index j = 0; j < joints; ++j)
    for (int d = 0; d < kJointDim; ++d) skeleton(j, d) = row(0, j * kJointDim + d);
  return skeleton;
}

/// Sum over sequences, samples and encoded states of squared prediction
/// errors, times `weight` (1/N for the mean over N sequences).
///
/// `frame_rows` holds the encoded graph representation of every frame,
/// sequence-major ((N*f) x width); `skeletons` the matching ground-truth
/// skeletons ((N*f) x J*3); `samples[i]` the f-1 samples of sequence i.
template <class T>
T ssp_loss(const std::vector<LstmLayer<T>>& encoder, const Mlp<T>& predictor, const T& frame_rows,
           const Mat<scalar_of_t<T>>& skeletons, const std::vector<std::vector<SparseSample>>& samples, int frames,
           scalar_of_t<T> weight) {
  using S = scalar_of_t<T>;
  const int count = static_cast<int>(samples.size());
  require(count > 0, ErrorCode::InvalidConfig, "SSP loss needs at least one sequence");
  require(frame_rows.rows() == static_cast<Eigen::Index>(count) * frames && skeletons.rows() == frame_rows.rows(),
          ErrorCode::DimensionMismatch, "frame rows do not match N*f");
  std::vector<T> terms;
  for (int k = 1; k < frames; ++k) {
    std::vector<T> inputs;
    std::vector<IndexList> target_rows(k);
    for (int t = 0; t < k; ++t) {
      IndexList rows;
      for (int i = 0; i < count; ++i) {
        const SparseSample& sample = samples[i].at(k - 1);
        require(sample.length() == k, ErrorCode::InvalidLength, "sample list must hold lengths 1..f-1 in order");
        rows.push_back(i * frames + sample.indices[t] - 1);
        target_rows[t].push_back(i * frames + prediction_target(sample, t) - 1);
      }
      inputs.push_back(gather_rows(frame_rows, rows));
    }
    const std::vector<T> states = encode_sequence(encoder, inputs);
    for (int t = 0; t < k; ++t) {
      const Mat<S> target = gather_rows(skeletons, target_rows[t]);
      terms.push_back(squared_norm(sub(predict_next(predictor, states[t]), target)));
    }
  }
  T total = terms.front();
  for (std::size_t k = 1; k < terms.size(); ++k) total = add(total, terms[k]);
  return scale(total, weight);
}

}  // namespace skelgraph

#endif  // SKELGRAPH_SSP_HPP
