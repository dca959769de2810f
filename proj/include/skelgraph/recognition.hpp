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

// Sequence-level identity prediction by averaging per-frame class
// distributions, and the cross-entropy fine-tuning loss.

#ifndef SKELGRAPH_RECOGNITION_HPP
#define SKELGRAPH_RECOGNITION_HPP

#include <vector>

#include "skelgraph/ssp.hpp"

namespace skelgraph {

inline constexpr double kLogFloor = 1e-12;
inline constexpr double kDefaultWeightDecay = 0.0005;

/// Averaged class distribution of each sequence: (1/f) sum_t softmax(f_re(h_t)).
/// `states` holds one B x D2 matrix per time step; the result is B x C.
template <class T>
T average_prediction(const Mlp<T>& head, const std::vector<T>& states) {
  require(!states.empty(), ErrorCode::InvalidLength, "no encoded states to classify");
  std::vector<T> per_frame;
  per_frame.reserve(states.size());
  for (const T& h : states) {
    require(h.cols() == head.hidden_weights.rows(), ErrorCode::DimensionMismatch, "encoded state width mismatch");
    per_frame.push_back(softmax_rows(mlp_forward(head, h)));
  }
  return mean_of(per_frame);
}

struct SequencePrediction {
  MatrixXd per_frame;  // f x C
  VectorXd average;    // C
  int label = 1;       // 1-based argmax, lowest index wins ties
};

/// Index of the largest entry; the lowest index wins ties.
inline int argmax_lowest(const VectorXd& scores) {
  int best = 0;
  for (int c = 1; c < scores.size(); ++c)
    if (scores(c) > scores(best)) best = c;
  return best;
}

/// Prediction for one sequence given its f x D2 encoded states.
inline SequencePrediction predict_sequence(const Mlp<MatrixXd>& head, const MatrixXd& states) {
  const Eigen::Index classes = head.output_weights.cols();
  require(classes >= 2, ErrorCode::InvalidConfig, "recognition needs at least two classes");
  require(states.rows() >= 1 && states.cols() == head.hidden_weights.rows(), ErrorCode::DimensionMismatch,
          "states must be f x D2");
  SequencePrediction out;
  out.per_frame = softmax_rows(mlp_forward(head, states));
  out.average = out.per_frame.colwise().mean().transpose();
  out.label = argmax_lowest(out.average) + 1;
  return out;
}

/// -(weight) * sum_i log yhat(i, label_i), labels 1-based. With weight 1/N this
/// is the mean cross entropy; the L2 term is added by the caller.
template <class T>
T cross_entropy(const T& averaged, const IndexList& labels, scalar_of_t<T> weight) {
  using S = scalar_of_t<T>;
  require(static_cast<Eigen::Index>(labels.size()) == averaged.rows(), ErrorCode::DimensionMismatch,
          "one label per sequence");
  IndexList columns;
  for (int label : labels) {
    require(label >= 1 && label <= averaged.cols(), ErrorCode::InvalidLabel,
            "label " + std::to_string(label) + " outside 1.." + std::to_string(averaged.cols()));
    columns.push_back(label - 1);
  }
  return scale(sum_all(log_floor(pick(averaged, columns), S(kLogFloor))), -weight);
}

/// beta * sum of squared entries over every parameter.
template <class T>
T l2_penalty(const std::vector<T>& parameters, scalar_of_t<T> beta) {
  require(!parameters.empty(), ErrorCode::InvalidConfig, "no parameters to regularize");
  T total = squared_norm(parameters.front());
  for (std::size_t k = 1; k < parameters.size(); ++k) total = add(total, squared_norm(parameters[k]));
  return scale(total, beta);
}

/// Full fine-tuning objective on a batch of averaged predictions.
template <class T>
T recognition_loss(const T& averaged, const IndexList& labels, const std::vector<T>& parameters,
                   scalar_of_t<T> beta) {
  const auto n = static_cast<scalar_of_t<T>>(labels.size());
  return add(cross_entropy(averaged, labels, scalar_of_t<T>(1) / n), l2_penalty(parameters, beta));
}

}  // namespace skelgraph

#endif  // SKELGRAPH_RECOGNITION_HPP
