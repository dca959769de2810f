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

#include "skelgraph/model.hpp"

#include <cmath>

#include "skelgraph/text.hpp"

namespace skelgraph {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_bias(const std::string& name) {
  return ends_with(name, ".bias") || ends_with(name, ".b1") || ends_with(name, ".b2");
}

MatrixXd initial_value(const std::string& name, int rows, int cols, int hidden, Rng& rng) {
  MatrixXd value = MatrixXd::Zero(rows, cols);
  if (is_bias(name)) {
    if (name.rfind("lstm.", 0) == 0) value.middleCols(hidden, hidden).setConstant(kForgetBias);
    return value;
  }
  const double limit = std::sqrt(6.0 / (rows + cols));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) value(r, c) = rng.uniform(-limit, limit);
  return value;
}

const std::string& meta_at(const std::map<std::string, std::string>& meta, const std::string& key) {
  auto it = meta.find(key);
  require(it != meta.end(), ErrorCode::InvalidConfig, "checkpoint metadata lacks " + key);
  return it->second;
}

}  // namespace

void ModelConfig::validate() const {
  require(frames >= 2 && frames % 2 == 0, ErrorCode::InvalidConfig, "frames must be even and at least 2");
  require(feature_dim > 0 && heads > 0 && hidden > 0 && lstm_layers > 0, ErrorCode::InvalidConfig,
          "feature_dim, heads, hidden and lstm_layers must be positive");
  require(predictor_hidden > 0 && classifier_hidden > 0, ErrorCode::InvalidConfig, "head widths must be positive");
  require(classes >= 2, ErrorCode::InvalidConfig, "at least two classes are required");
  require(fusion >= 0, ErrorCode::InvalidConfig, "fusion must be non-negative");
  require(relation_slope >= 0, ErrorCode::InvalidConfig, "relation slope must be non-negative");
}

std::map<std::string, std::string> ModelConfig::to_metadata() const {
  return {
      {"model.layout", layout},
      {"model.frames", std::to_string(frames)},
      {"model.feature_dim", std::to_string(feature_dim)},
      {"model.heads", std::to_string(heads)},
      {"model.fusion", text::format_double(fusion)},
      {"model.hidden", std::to_string(hidden)},
      {"model.lstm_layers", std::to_string(lstm_layers)},
      {"model.predictor_hidden", std::to_string(predictor_hidden)},
      {"model.classifier_hidden", std::to_string(classifier_hidden)},
      {"model.classes", std::to_string(classes)},
      {"model.relation_slope", text::format_double(relation_slope)},
      {"model.ccrl_sequential", ccrl_sequential ? "true" : "false"},
      {"model.flatten", "row_major"},
      {"model.init", "glorot_uniform"},
      {"model.forget_bias", text::format_double(kForgetBias)},
      {"model.head_activation", "relu"},
  };
}

ModelConfig ModelConfig::from_metadata(const std::map<std::string, std::string>& meta) {
  ModelConfig c;
  c.layout = meta_at(meta, "model.layout");
  c.frames = text::to_int(meta_at(meta, "model.frames"), "model.frames");
  c.feature_dim = text::to_int(meta_at(meta, "model.feature_dim"), "model.feature_dim");
  c.heads = text::to_int(meta_at(meta, "model.heads"), "model.heads");
  c.fusion = text::to_double(meta_at(meta, "model.fusion"), "model.fusion");
  c.hidden = text::to_int(meta_at(meta, "model.hidden"), "model.hidden");
  c.lstm_layers = text::to_int(meta_at(meta, "model.lstm_layers"), "model.lstm_layers");
  c.predictor_hidden = text::to_int(meta_at(meta, "model.predictor_hidden"), "model.predictor_hidden");
  c.classifier_hidden = text::to_int(meta_at(meta, "model.classifier_hidden"), "model.classifier_hidden");
  c.classes = text::to_int(meta_at(meta, "model.classes"), "model.classes");
  c.relation_slope = text::to_double(meta_at(meta, "model.relation_slope"), "model.relation_slope");
  const std::string& seq = meta_at(meta, "model.ccrl_sequential");
  require(seq == "true" || seq == "false", ErrorCode::ParseError, "model.ccrl_sequential must be true or false");
  c.ccrl_sequential = seq == "true";
  c.validate();
  return c;
}

GraphContext GraphContext::from_layout(const Layout& layout) {
  GraphContext g;
  g.joints = layout.joint_count();
  for (int l = 0; l < kLevels; ++l) {
    const GroupingTable& table = layout.grouping(l + 1);
    g.nodes[l] = table.node_count();
    g.masks[l] = neighbor_mask(table.node_count(), layout.level_edges(l + 1));
    g.pooling[l] = pooling_matrix(table, g.joints);
    g.joint_maps[l] = joint_to_node(table, g.joints);
  }
  return g;
}

Batch make_batch(const std::vector<SkeletonSequence>& data, const IndexList& members, int frames) {
  require(!members.empty(), ErrorCode::InvalidConfig, "a batch needs at least one sequence");
  Batch batch;
  batch.sequences = static_cast<int>(members.size());
  batch.frames = frames;
  const int joints = data.at(members.front()).joint_count();
  batch.joints.resize(static_cast<Eigen::Index>(batch.sequences) * frames * joints, kJointDim);
  batch.skeletons.resize(static_cast<Eigen::Index>(batch.sequences) * frames, joints * kJointDim);
  for (int i = 0; i < batch.sequences; ++i) {
    const SkeletonSequence& seq = data.at(members[i]);
    require(seq.length() == frames, ErrorCode::InvalidLength,
            "sequence " + seq.source_id + " has " + std::to_string(seq.length()) + " frames, expected " +
                std::to_string(frames));
    require(seq.joint_count() == joints, ErrorCode::LayoutMismatch, "sequences in a batch must share J");
    for (int t = 0; t < frames; ++t) {
      const MatrixXd& frame = seq.frames[t];
      const Eigen::Index row = static_cast<Eigen::Index>(i) * frames + t;
      batch.joints.middleRows(row * joints, joints) = frame;
      for (int j = 0; j < joints; ++j)
        for (int d = 0; d < kJointDim; ++d) batch.skeletons(row, j * kJointDim + d) = frame(j, d);
    }
    batch.labels.push_back(seq.label);
  }
  return batch;
}

Batch make_batch(const std::vector<SkeletonSequence>& data, int frames) {
  IndexList all(data.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = static_cast<int>(k);
  return make_batch(data, all, frames);
}

SampleSet draw_samples(int sequences, int frames, Rng& rng) {
  SampleSet samples;
  samples.reserve(static_cast<std::size_t>(sequences));
  for (int i = 0; i < sequences; ++i) samples.push_back(sample_subsequences(frames, rng));
  return samples;
}

Model::Model(ModelConfig config, std::uint64_t seed)
    : config_(std::move(config)), layout_(bundled_layout(config_.layout)), graph_(GraphContext::from_layout(layout_)) {
  config_.validate();
  Rng rng(seed);
  Network<MatrixXd> shapes;
  visit_parameters(shapes, config_, graph_.joints, [&](const std::string& name, int rows, int cols, MatrixXd&) {
    store_.add(name, initial_value(name, rows, cols, config_.hidden, rng));
  });
}

Model::Model(ModelConfig config, ParameterStore parameters)
    : config_(std::move(config)), layout_(bundled_layout(config_.layout)), graph_(GraphContext::from_layout(layout_)),
      store_(std::move(parameters)) {
  config_.validate();
  Network<MatrixXd> shapes;
  std::size_t k = 0;
  visit_parameters(shapes, config_, graph_.joints, [&](const std::string& name, int rows, int cols, MatrixXd&) {
    require(k < store_.size() && store_[k].name == name, ErrorCode::VersionMismatch,
            "parameter " + name + " missing or out of order");
    require(store_[k].value.rows() == rows && store_[k].value.cols() == cols, ErrorCode::DimensionMismatch,
            "parameter " + name + " has shape " + shape_of(store_[k].value) + ", expected " + shape_string(rows, cols));
    ++k;
  });
  require(k == store_.size(), ErrorCode::VersionMismatch, "checkpoint holds unexpected parameters");
}

Network<MatrixXd> Model::network() const {
  Network<MatrixXd> net;
  std::size_t k = 0;
  visit_parameters(net, config_, graph_.joints,
                   [&](const std::string&, int, int, MatrixXd& slot) { slot = store_[k++].value; });
  return net;
}

Network<Var<double>> Model::bind(Tape<double>& tape, GradientList& grads) const {
  require(grads.size() == store_.size(), ErrorCode::DimensionMismatch, "gradient list does not match the store");
  Network<Var<double>> net;
  std::size_t k = 0;
  visit_parameters(net, config_, graph_.joints, [&](const std::string&, int, int, Var<double>& slot) {
    slot = tape.parameter(store_[k].value, &grads[k]);
    ++k;
  });
  return net;
}

double Model::prediction_objective(const Batch& batch, const SampleSet& samples, double weight,
                                   GradientList* grads) const {
  require(batch.frames == config_.frames, ErrorCode::InvalidLength, "batch frame count differs from the model's f");
  require(static_cast<int>(samples.size()) == batch.sequences, ErrorCode::DimensionMismatch,
          "one sample list per sequence");
  if (grads == nullptr) {
    const Network<MatrixXd> net = network();
    const MatrixXd rows = frame_representations(net, graph_, config_, batch.joints);
    return scalar_value(ssp_loss(net.encoder, net.predictor, rows, batch.skeletons, samples, batch.frames, weight));
  }
  Tape<double> tape;
  const Network<Var<double>> net = bind(tape, *grads);
  const Var<double> rows = frame_representations(net, graph_, config_, tape.constant(batch.joints));
  const Var<double> loss =
      ssp_loss(net.encoder, net.predictor, rows, batch.skeletons, samples, batch.frames, weight);
  tape.backward(loss);
  return scalar_value(loss.value());
}

double Model::recognition_objective(const Batch& batch, double weight, double beta, GradientList* grads) const {
  require(batch.frames == config_.frames, ErrorCode::InvalidLength, "batch frame count differs from the model's f");
  for (int label : batch.labels)
    require(label >= 1 && label <= config_.classes, ErrorCode::InvalidLabel,
            "label " + std::to_string(label) + " outside 1.." + std::to_string(config_.classes));
  if (grads == nullptr) {
    Network<MatrixXd> net = network();
    const MatrixXd scores = sequence_scores(net, graph_, config_, batch.joints, batch.sequences);
    double loss = scalar_value(cross_entropy(scores, batch.labels, weight));
    if (beta != 0) loss += beta * store_.squared_norm();
    return loss;
  }
  Tape<double> tape;
  Network<Var<double>> net = bind(tape, *grads);
  const Var<double> scores = sequence_scores(net, graph_, config_, tape.constant(batch.joints), batch.sequences);
  Var<double> loss = cross_entropy(scores, batch.labels, weight);
  if (beta != 0) loss = add(loss, l2_penalty(parameter_list(net, config_, graph_.joints), beta));
  tape.backward(loss);
  return scalar_value(loss.value());
}

MatrixXd Model::scores(const Batch& batch) const {
  require(batch.frames == config_.frames, ErrorCode::InvalidLength, "batch frame count differs from the model's f");
  return sequence_scores(network(), graph_, config_, batch.joints, batch.sequences);
}

MatrixXd Model::encoded_states(const SkeletonSequence& seq) const {
  require(seq.length() >= 1, ErrorCode::InvalidLength, "cannot encode an empty sequence");
  validate_sequence(seq, graph_.joints);
  const Network<MatrixXd> net = network();
  MatrixXd joints(static_cast<Eigen::Index>(seq.length()) * graph_.joints, kJointDim);
  for (int t = 0; t < seq.length(); ++t) joints.middleRows(static_cast<Eigen::Index>(t) * graph_.joints, graph_.joints) = seq.frames[t];
  const std::vector<MatrixXd> states =
      encode_sequence(net.encoder, time_major(frame_representations(net, graph_, config_, joints), 1, seq.length()));
  MatrixXd out(seq.length(), config_.hidden);
  for (int t = 0; t < seq.length(); ++t) out.row(t) = states[t].row(0);
  return out;
}

SequencePrediction Model::predict(const SkeletonSequence& seq) const {
  return predict_sequence(network().classifier, encoded_states(seq));
}

GraphEncoding<MatrixXd> Model::encode_frame(const MatrixXd& frame) const {
  require(frame.rows() == graph_.joints && frame.cols() == kJointDim, ErrorCode::LayoutMismatch,
          "frame must be " + shape_string(graph_.joints, kJointDim));
  return encode_graphs(network(), graph_, config_, frame);
}

}  // namespace skelgraph
