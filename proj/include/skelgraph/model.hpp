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

// The full network: multi-level graph encoding of every frame, the stacked
// LSTM, the skeleton prediction head and the identity head.

#ifndef SKELGRAPH_MODEL_HPP
#define SKELGRAPH_MODEL_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "skelgraph/collaborative_relation.hpp"
#include "skelgraph/graph.hpp"
#include "skelgraph/layout.hpp"
#include "skelgraph/parameters.hpp"
#include "skelgraph/recognition.hpp"
#include "skelgraph/skeleton.hpp"
#include "skelgraph/ssp.hpp"

namespace skelgraph {

struct ModelConfig {
  std::string layout = "kinect20";
  int frames = 6;           // window length f
  int feature_dim = 8;      // D1
  int heads = 8;            // m
  double fusion = kDefaultFusion;
  int hidden = 128;         // D2
  int lstm_layers = 2;
  int predictor_hidden = 128;
  int classifier_hidden = 128;
  int classes = 2;          // C
  double relation_slope = kRelationSlope;
  bool ccrl_sequential = false;

  void validate() const;
  /// Flat key/value view, as stored in checkpoints.
  std::map<std::string, std::string> to_metadata() const;
  static ModelConfig from_metadata(const std::map<std::string, std::string>& meta);
};

/// Fixed (non-trainable) structure derived from a layout.
struct GraphContext {
  int joints = 0;
  std::array<int, kLevels> nodes{};
  std::array<BoolMatrix, kLevels> masks;
  std::array<MatrixXd, kLevels> pooling;     // n_l x J group averages
  std::array<IndexList, kLevels> joint_maps;  // joint -> containing node

  static GraphContext from_layout(const Layout& layout);
};

template <class T>
struct Network {
  std::array<std::vector<RelationHead<T>>, kLevels> msrl;
  T collab_part_joint;  // level 2 <- level 1
  T collab_body_part;   // level 3 <- level 2
  std::vector<LstmLayer<T>> encoder;
  Mlp<T> predictor;
  Mlp<T> classifier;
};

/// Calls fn(name, rows, cols, slot) for every trainable in a fixed order.
/// This is the single place that names and shapes the parameters.
template <class T, class Fn>
void visit_parameters(Network<T>& net, const ModelConfig& c, int joints, Fn&& fn) {
  const int d1 = c.feature_dim;
  const int d2 = c.hidden;
  for (int l = 0; l < kLevels; ++l) {
    net.msrl[l].resize(static_cast<std::size_t>(c.heads));
    for (int s = 0; s < c.heads; ++s) {
      const std::string base = "msrl.l" + std::to_string(l + 1) + ".h" + std::to_string(s);
      fn(base + ".feature_map", d1, kJointDim, net.msrl[l][s].feature_map);
      fn(base + ".relation", 2 * d1, 1, net.msrl[l][s].relation);
    }
  }
  fn(std::string("ccrl.w21"), d1, d1, net.collab_part_joint);
  fn(std::string("ccrl.w32"), d1, d1, net.collab_body_part);
  net.encoder.resize(static_cast<std::size_t>(c.lstm_layers));
  for (int k = 0; k < c.lstm_layers; ++k) {
    const std::string base = "lstm.layer" + std::to_string(k);
    fn(base + ".w_input", k == 0 ? joints * d1 : d2, 4 * d2, net.encoder[k].input_weights);
    fn(base + ".w_recurrent", d2, 4 * d2, net.encoder[k].recurrent_weights);
    fn(base + ".bias", 1, 4 * d2, net.encoder[k].bias);
  }
  auto mlp = [&](const std::string& base, Mlp<T>& head, int in, int hidden, int out) {
    fn(base + ".w1", in, hidden, head.hidden_weights);
    fn(base + ".b1", 1, hidden, head.hidden_bias);
    fn(base + ".w2", hidden, out, head.output_weights);
    fn(base + ".b2", 1, out, head.output_bias);
  };
  mlp("pred", net.predictor, d2, c.predictor_hidden, joints * kJointDim);
  mlp("rec", net.classifier, d2, c.classifier_hidden, c.classes);
}

template <class T>
std::vector<T> parameter_list(Network<T>& net, const ModelConfig& c, int joints) {
  std::vector<T> out;
  visit_parameters(net, c, joints, [&](const std::string&, int, int, T& slot) { out.push_back(slot); });
  return out;
}

/// Intermediate products of the graph encoding, kept for export and tests.
template <class T>
struct GraphEncoding {
  std::array<T, kLevels> inputs;  // pooled node positions per level
  std::array<MsrlOutput<T>, kLevels> msrl;
  T relations_21;  // (B*n2) x n1
  T relations_32;  // (B*n3) x n2
  T updated_part;  // level 2 after the collaborative update
  T updated_body;  // level 3 after the collaborative update
  T fused;         // (B*J) x D1
};

/// Encodes B frames stacked as (B*J) x 3 joint rows.
template <class T>
GraphEncoding<T> encode_graphs(const Network<T>& net, const GraphContext& g, const ModelConfig& c, const T& joints) {
  using S = scalar_of_t<T>;
  require(joints.cols() == kJointDim && joints.rows() % g.joints == 0, ErrorCode::DimensionMismatch,
          "joint rows must be (B*J) x 3, got " + shape_string(joints.rows(), joints.cols()));
  GraphEncoding<T> out;
  out.inputs[0] = joints;
  for (int l = 1; l < kLevels; ++l) out.inputs[l] = block_pool(Mat<S>(g.pooling[l]), joints);
  for (int l = 0; l < kLevels; ++l)
    out.msrl[l] = msrl_forward(net.msrl[l], out.inputs[l], g.masks[l], S(c.relation_slope));

  const T& v1 = out.msrl[0].features;
  const T& v2 = out.msrl[1].features;
  const T& v3 = out.msrl[2].features;
  out.relations_21 = collab_relations(v2, v1, g.nodes[0]);
  out.updated_part = collab_update(v2, v1, out.relations_21, net.collab_part_joint);
  const T& lower = c.ccrl_sequential ? out.updated_part : v2;
  out.relations_32 = collab_relations(v3, lower, g.nodes[1]);
  out.updated_body = collab_update(v3, lower, out.relations_32, net.collab_body_part);

  out.fused = fuse_levels(v1, broadcast_to_joints(out.updated_part, g.joint_maps[1], g.nodes[1]),
                          broadcast_to_joints(out.updated_body, g.joint_maps[2], g.nodes[2]), S(c.fusion));
  return out;
}

/// One flattened J*D1 row per frame: (B) x (J*D1).
template <class T>
T frame_representations(const Network<T>& net, const GraphContext& g, const ModelConfig& c, const T& joints) {
  return reshape_rows(encode_graphs(net, g, c, joints).fused, g.joints);
}

/// Per-step inputs of N sequences of f frames: step t gathers rows i*f + t.
template <class T>
std::vector<T> time_major(const T& frame_rows, int sequences, int frames) {
  std::vector<T> steps;
  for (int t = 0; t < frames; ++t) {
    IndexList rows;
    for (int i = 0; i < sequences; ++i) rows.push_back(i * frames + t);
    steps.push_back(gather_rows(frame_rows, rows));
  }
  return steps;
}

/// Averaged class distribution of each sequence: N x C.
template <class T>
T sequence_scores(const Network<T>& net, const GraphContext& g, const ModelConfig& c, const T& joints,
                  int sequences) {
  const T rows = frame_representations(net, g, c, joints);
  return average_prediction(net.classifier, encode_sequence(net.encoder, time_major(rows, sequences, c.frames)));
}

/// A batch of equal-length sequences in stacked form.
struct Batch {
  int sequences = 0;
  int frames = 0;
  MatrixXd joints;     // (N*f*J) x 3
  MatrixXd skeletons;  // (N*f) x (J*3), row-major skeletons
  IndexList labels;    // 1-based, 0 when unlabeled
};

Batch make_batch(const std::vector<SkeletonSequence>& data, const IndexList& members, int frames);
Batch make_batch(const std::vector<SkeletonSequence>& data, int frames);

using SampleSet = std::vector<std::vector<SparseSample>>;

/// Fresh sparse samples for each sequence of a batch.
SampleSet draw_samples(int sequences, int frames, Rng& rng);

class Model {
 public:
  /// Glorot-uniform weights, zero biases, LSTM forget bias kForgetBias.
  Model(ModelConfig config, std::uint64_t seed);
  /// Adopts existing values; names and shapes must match the configuration.
  Model(ModelConfig config, ParameterStore parameters);

  const ModelConfig& config() const { return config_; }
  const Layout& layout() const { return layout_; }
  const GraphContext& graph() const { return graph_; }
  ParameterStore& parameters() { return store_; }
  const ParameterStore& parameters() const { return store_; }

  /// Dense copy of the current values.
  Network<MatrixXd> network() const;
  /// Tape-bound view whose gradients accumulate into `grads` on backward.
  Network<Var<double>> bind(Tape<double>& tape, GradientList& grads) const;

  /// weight * sum of squared prediction errors. Adds d/dtheta into `grads`
  /// when given.
  double prediction_objective(const Batch& batch, const SampleSet& samples, double weight,
                              GradientList* grads = nullptr) const;
  /// weight * cross entropy + beta * ||theta||^2 (the penalty is skipped when
  /// beta is 0). Adds d/dtheta into `grads` when given.
  double recognition_objective(const Batch& batch, double weight, double beta, GradientList* grads = nullptr) const;

  /// N x C averaged class distributions.
  MatrixXd scores(const Batch& batch) const;
  /// f x D2 encoded states of one sequence.
  MatrixXd encoded_states(const SkeletonSequence& seq) const;
  SequencePrediction predict(const SkeletonSequence& seq) const;
  /// Graph encoding of one frame (J x 3).
  GraphEncoding<MatrixXd> encode_frame(const MatrixXd& frame) const;

 private:
  ModelConfig config_;
  Layout layout_;
  GraphContext graph_;
  ParameterStore store_;
};

}  // namespace skelgraph

#endif  // SKELGRAPH_MODEL_HPP
