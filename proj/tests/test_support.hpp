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

// Shared fixtures and independent reference implementations for the tests.
// The oracles use plain loops over single frames and single pairs, never
// the batched kernels they are compared against.

#ifndef SKELGRAPH_TESTS_TEST_SUPPORT_HPP
#define SKELGRAPH_TESTS_TEST_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "skelgraph/skelgraph.hpp"

namespace skelgraph::testing {

inline MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
  MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.uniform(-scale, scale);
  return m;
}

inline double max_abs_diff(const MatrixXd& a, const MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

/// Random connected graph: a random spanning tree plus a few extra edges.
inline EdgeList random_connected_edges(Rng& rng, int n, int extra) {
  EdgeList edges;
  auto has = [&](int a, int b) {
    return std::any_of(edges.begin(), edges.end(), [&](const Edge& e) { return e.first == a && e.second == b; });
  };
  for (int v = 1; v < n; ++v) {
    const int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(v)));
    edges.push_back({std::min(u, v), std::max(u, v)});
  }
  for (int k = 0; k < extra && n > 2; ++k) {
    const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    if (a != b && !has(std::min(a, b), std::max(a, b))) edges.push_back({std::min(a, b), std::max(a, b)});
  }
  return edges;
}

inline RelationHead<MatrixXd> random_head(Rng& rng, int d1, int d, double scale = 0.8) {
  return {random_matrix(rng, d1, d, scale), random_matrix(rng, 2 * d1, 1, scale)};
}

/// The small configuration used for gradient checks.
inline ModelConfig tiny_config() {
  ModelConfig c;
  c.layout = "tiny6";
  c.frames = 4;
  c.feature_dim = 4;
  c.heads = 2;
  c.hidden = 8;
  c.predictor_hidden = 8;
  c.classifier_hidden = 8;
  c.classes = 3;
  return c;
}

/// Labelled synthetic windows of length `frames` on `layout`.
inline DatasetSplit tiny_data(const std::string& layout, int identities, int per_identity, int test_per_identity,
                              int frames, std::uint64_t seed, double noise = 0.005) {
  SynthConfig s;
  s.layout = layout;
  s.num_identities = identities;
  s.sequences_per_identity = per_identity;
  s.test_sequences_per_identity = test_per_identity;
  s.frames = frames;
  s.noise = noise;
  DatasetSplit raw = generate_synthetic_gait(s, seed);
  const int reference = bundled_layout(layout).reference_joint;
  raw.train = preprocess(raw.train, 0, reference, frames);
  if (!raw.test.empty()) raw.test = preprocess(raw.test, 0, reference, frames);
  return raw;
}

namespace oracle {

inline double leaky(double x, double slope) { return x > 0 ? x : slope * x; }
inline double elu(double x) { return x > 0 ? x : std::exp(x) - 1.0; }
inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Softmax of logits(i, j) over j with mask(i, j), zeros elsewhere.
inline MatrixXd masked_softmax(const MatrixXd& logits, const BoolMatrix& mask) {
  MatrixXd out = MatrixXd::Zero(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    double total = 0;
    for (Eigen::Index j = 0; j < logits.cols(); ++j)
      if (mask(i, j)) total += std::exp(logits(i, j));
    for (Eigen::Index j = 0; j < logits.cols(); ++j)
      if (mask(i, j)) out(i, j) = std::exp(logits(i, j)) / total;
  }
  return out;
}

struct MsrlResult {
  MatrixXd features;
  std::vector<MatrixXd> adjacency;
};

/// Single-frame multi-head layer, one pair and one neighbour at a time.
inline MsrlResult msrl(const std::vector<RelationHead<MatrixXd>>& heads, const MatrixXd& nodes,
                       const BoolMatrix& mask, double slope = kRelationSlope) {
  const Eigen::Index n = nodes.rows();
  const Eigen::Index d1 = heads.front().feature_map.rows();
  MsrlResult out;
  out.features = MatrixXd::Zero(n, d1);
  for (const auto& head : heads) {
    MatrixXd logits(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const VectorXd wi = head.feature_map * nodes.row(i).transpose();
        const VectorXd wj = head.feature_map * nodes.row(j).transpose();
        double pre = 0;
        for (Eigen::Index k = 0; k < d1; ++k) pre += head.relation(k, 0) * wi(k) + head.relation(d1 + k, 0) * wj(k);
        logits(i, j) = leaky(pre, slope);
      }
    const MatrixXd a = masked_softmax(logits, mask);
    for (Eigen::Index i = 0; i < n; ++i) {
      VectorXd acc = VectorXd::Zero(d1);
      for (Eigen::Index j = 0; j < n; ++j)
        if (mask(i, j)) acc += a(i, j) * (head.feature_map * nodes.row(j).transpose());
      for (Eigen::Index k = 0; k < d1; ++k) out.features(i, k) += elu(acc(k)) / static_cast<double>(heads.size());
    }
    out.adjacency.push_back(a);
  }
  return out;
}

/// Softmax over lower nodes of inner products, one frame.
inline MatrixXd collab(const MatrixXd& upper, const MatrixXd& lower) {
  MatrixXd out(upper.rows(), lower.rows());
  for (Eigen::Index i = 0; i < upper.rows(); ++i) {
    std::vector<double> e(static_cast<std::size_t>(lower.rows()));
    double total = 0;
    for (Eigen::Index j = 0; j < lower.rows(); ++j) {
      double dot = 0;
      for (Eigen::Index k = 0; k < upper.cols(); ++k) dot += upper(i, k) * lower(j, k);
      e[j] = std::exp(dot);
      total += e[j];
    }
    for (Eigen::Index j = 0; j < lower.rows(); ++j) out(i, j) = e[j] / total;
  }
  return out;
}

inline MatrixXd collab_update(const MatrixXd& upper, const MatrixXd& lower, const MatrixXd& rel, const MatrixXd& w) {
  MatrixXd out = upper;
  for (Eigen::Index i = 0; i < upper.rows(); ++i)
    for (Eigen::Index j = 0; j < lower.rows(); ++j)
      for (Eigen::Index a = 0; a < w.rows(); ++a)
        for (Eigen::Index b = 0; b < w.cols(); ++b) out(i, a) += rel(i, j) * w(a, b) * lower(j, b);
  return out;
}

struct CellState {
  VectorXd h;
  VectorXd c;
};

/// One LSTM step for a single sequence with explicit gate loops.
inline CellState lstm_step(const LstmLayer<MatrixXd>& layer, const VectorXd& x, const CellState* prev) {
  const Eigen::Index hdim = layer.recurrent_weights.rows();
  CellState next{VectorXd::Zero(hdim), VectorXd::Zero(hdim)};
  for (Eigen::Index u = 0; u < hdim; ++u) {
    double pre[4];
    for (int gate = 0; gate < 4; ++gate) {
      const Eigen::Index col = gate * hdim + u;
      double z = layer.bias(0, col);
      for (Eigen::Index k = 0; k < x.size(); ++k) z += x(k) * layer.input_weights(k, col);
      if (prev)
        for (Eigen::Index k = 0; k < hdim; ++k) z += prev->h(k) * layer.recurrent_weights(k, col);
      pre[gate] = z;
    }
    const double c_prev = prev ? prev->c(u) : 0.0;
    next.c(u) = logistic(pre[1]) * c_prev + logistic(pre[0]) * std::tanh(pre[2]);
    next.h(u) = logistic(pre[3]) * std::tanh(next.c(u));
  }
  return next;
}

/// Top-layer hidden states of one sequence (rows are time steps).
inline std::vector<VectorXd> lstm(const std::vector<LstmLayer<MatrixXd>>& layers, std::vector<VectorXd> inputs) {
  for (const auto& layer : layers) {
    std::vector<VectorXd> outputs;
    CellState state;
    for (std::size_t t = 0; t < inputs.size(); ++t) {
      state = lstm_step(layer, inputs[t], t == 0 ? nullptr : &state);
      outputs.push_back(state.h);
    }
    inputs = std::move(outputs);
  }
  return inputs;
}

inline VectorXd mlp(const Mlp<MatrixXd>& m, const VectorXd& x) {
  VectorXd hidden(m.hidden_weights.cols());
  for (Eigen::Index u = 0; u < hidden.size(); ++u) {
    double z = m.hidden_bias(0, u);
    for (Eigen::Index k = 0; k < x.size(); ++k) z += x(k) * m.hidden_weights(k, u);
    hidden(u) = std::max(z, 0.0);
  }
  VectorXd out(m.output_weights.cols());
  for (Eigen::Index u = 0; u < out.size(); ++u) {
    double z = m.output_bias(0, u);
    for (Eigen::Index k = 0; k < hidden.size(); ++k) z += hidden(k) * m.output_weights(k, u);
    out(u) = z;
  }
  return out;
}

inline VectorXd softmax(const VectorXd& z) {
  const double peak = z.maxCoeff();
  VectorXd e = (z.array() - peak).exp();
  return e / e.sum();
}

/// Frame representation of one frame: the fused joint features flattened
/// row-major, built from the per-frame oracles above.
inline VectorXd frame_representation(const Network<MatrixXd>& net, const Layout& layout, const ModelConfig& c,
                                     const MatrixXd& frame) {
  std::array<MatrixXd, kLevels> feats;
  for (int l = 1; l <= kLevels; ++l) {
    const LevelGraph g = build_level_graph(frame, layout, l);
    feats[l - 1] = msrl(net.msrl[l - 1], g.node_positions, neighbor_mask(g), c.relation_slope).features;
  }
  const MatrixXd r21 = collab(feats[1], feats[0]);
  const MatrixXd part = collab_update(feats[1], feats[0], r21, net.collab_part_joint);
  const MatrixXd& lower = c.ccrl_sequential ? part : feats[1];
  const MatrixXd r32 = collab(feats[2], lower);
  const MatrixXd body = collab_update(feats[2], lower, r32, net.collab_body_part);
  const int joints = layout.joint_count();
  const IndexList map2 = joint_to_node(layout.grouping(2), joints);
  const IndexList map3 = joint_to_node(layout.grouping(3), joints);
  VectorXd out(joints * c.feature_dim);
  for (int j = 0; j < joints; ++j)
    for (int k = 0; k < c.feature_dim; ++k)
      out(j * c.feature_dim + k) = feats[0](j, k) + c.fusion * (part(map2[j], k) + body(map3[j], k));
  return out;
}

/// Prediction loss accumulated sample by sample and state by state.
inline double ssp_loss(const Network<MatrixXd>& net, const Layout& layout, const ModelConfig& c,
                       const std::vector<SkeletonSequence>& seqs, const SampleSet& samples, double weight) {
  double total = 0;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    std::vector<VectorXd> reps;
    for (const auto& frame : seqs[i].frames) reps.push_back(frame_representation(net, layout, c, frame));
    for (const SparseSample& sample : samples[i]) {
      std::vector<VectorXd> inputs;
      for (int x : sample.indices) inputs.push_back(reps[x - 1]);
      const std::vector<VectorXd> states = lstm(net.encoder, inputs);
      for (int t = 0; t < sample.length(); ++t) {
        const int target = t + 1 < sample.length() ? sample.indices[t + 1] : sample.indices.back() + 1;
        const VectorXd pred = mlp(net.predictor, states[t]);
        const MatrixXd& truth = seqs[i].frames[target - 1];
        for (Eigen::Index j = 0; j < truth.rows(); ++j)
          for (int d = 0; d < kJointDim; ++d) {
            const double e = pred(j * kJointDim + d) - truth(j, d);
            total += e * e;
          }
      }
    }
  }
  return weight * total;
}

/// CMC by fully sorting each score row.
inline std::vector<double> cmc(const MatrixXd& scores, const IndexList& labels) {
  const Eigen::Index classes = scores.cols();
  std::vector<double> curve(static_cast<std::size_t>(classes), 0.0);
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    std::vector<int> order(static_cast<std::size_t>(classes));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores(i, a) > scores(i, b); });
    const auto pos = std::find(order.begin(), order.end(), labels[i] - 1) - order.begin();
    for (Eigen::Index r = pos; r < classes; ++r) curve[r] += 1.0;
  }
  for (double& v : curve) v = 100.0 * v / static_cast<double>(scores.rows());
  return curve;
}

}  // namespace oracle

/// Runs f on tape-bound copies of `inputs` and on plain copies, and compares
/// the analytic gradient with central differences.
template <class F>
GradCheckReport check_gradients(F f, const std::vector<MatrixXd>& inputs, const GradCheckOptions& options = {}) {
  ParameterStore store;
  for (std::size_t k = 0; k < inputs.size(); ++k) store.add("x" + std::to_string(k), inputs[k]);
  {
    Tape<double> tape;
    std::vector<Var<double>> vars;
    for (auto& e : store.entries()) vars.push_back(tape.parameter(e.value, &e.grad));
    tape.backward(f(vars));
  }
  return finite_difference_check(
      [&](const ParameterStore& s) {
        std::vector<MatrixXd> values;
        for (const auto& e : s.entries()) values.push_back(e.value);
        return scalar_value(f(values));
      },
      store, options);
}

/// Analytic gradients of a model objective in the store, then the
/// finite-difference comparison over every parameter.
template <class Objective>
GradCheckReport check_model_gradients(Model& model, Objective objective, const GradCheckOptions& options = {}) {
  GradientList grads = model.parameters().zero_gradients();
  objective(model, &grads);
  model.parameters().set_gradients(grads);
  const ModelConfig config = model.config();
  return finite_difference_check(
      [&](const ParameterStore& s) {
        const Model probe(config, s);
        return objective(probe, nullptr);
      },
      model.parameters(), options);
}

}  // namespace skelgraph::testing

#endif  // SKELGRAPH_TESTS_TEST_SUPPORT_HPP
