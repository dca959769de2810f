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

// Flat key=value run configuration shared by every command.

#ifndef SKELGRAPH_CONFIG_HPP
#define SKELGRAPH_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "skelgraph/model.hpp"
#include "skelgraph/trainer.hpp"

namespace skelgraph {

struct RunConfig {
  // data
  std::string layout = "kinect20";
  std::string data;  // dataset manifest
  int trim = 0;
  int frames = 6;
  // model
  int feature_dim = 8;
  int heads = 8;
  double lambda = kDefaultFusion;
  int hidden = 128;
  int lstm_layers = 2;
  int predictor_hidden = 128;
  int classifier_hidden = 128;
  double relation_slope = kRelationSlope;
  bool ccrl_sequential = false;
  // optimization
  double lr = 0.005;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  int batch_size = 256;
  int chunk_size = 16;
  double beta = kDefaultWeightDecay;
  int pretrain_epochs = 150;
  int finetune_epochs = 200;
  int patience = 0;
  int threads = 1;
  std::uint64_t seed = 1;
  // synthetic data
  int identities = 5;
  int sequences_per_identity = 20;
  int test_sequences_per_identity = 5;
  double noise = 0.005;
  double amplitude = 0.35;
  double cycle_frames = 12;
  std::string motion = "gait";

  /// Assigns one key; unknown keys and malformed values throw.
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;
  static const std::vector<std::string>& keys();

  /// Applies `key=value` lines; blank lines and `#` comments are skipped.
  void apply_text(const std::string& content);
  /// Every key, one `key=value` line each, in keys() order.
  std::string to_text() const;

  void validate() const;
  ModelConfig model_config(int classes) const;
  TrainConfig pretrain_config() const;
  TrainConfig finetune_config() const;
  SynthConfig synth_config() const;
};

RunConfig load_run_config(const std::string& path);

}  // namespace skelgraph

#endif  // SKELGRAPH_CONFIG_HPP
