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

#include "skelgraph/config.hpp"

#include <charconv>
#include <functional>
#include <map>
#include <sstream>

#include "skelgraph/text.hpp"

namespace skelgraph {

namespace {

struct Field {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

Field int_field(int RunConfig::*member) {
  return {[member](RunConfig& c, const std::string& v) { c.*member = text::to_int(v, "config"); },
          [member](const RunConfig& c) { return std::to_string(c.*member); }};
}

Field real_field(double RunConfig::*member) {
  return {[member](RunConfig& c, const std::string& v) { c.*member = text::to_double(v, "config"); },
          [member](const RunConfig& c) { return text::format_double(c.*member); }};
}

Field string_field(std::string RunConfig::*member) {
  return {[member](RunConfig& c, const std::string& v) { c.*member = v; },
          [member](const RunConfig& c) { return c.*member; }};
}

Field bool_field(bool RunConfig::*member) {
  return {[member](RunConfig& c, const std::string& v) {
            require(v == "true" || v == "false", ErrorCode::ParseError, "config: '" + v + "' is not true or false");
            c.*member = v == "true";
          },
          [member](const RunConfig& c) { return std::string(c.*member ? "true" : "false"); }};
}

Field seed_field() {
  return {[](RunConfig& c, const std::string& v) {
            std::uint64_t value = 0;
            auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
            require(ec == std::errc() && ptr == v.data() + v.size() && !v.empty(), ErrorCode::ParseError,
                    "config: '" + v + "' is not a seed");
            c.seed = value;
          },
          [](const RunConfig& c) { return std::to_string(c.seed); }};
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"layout", string_field(&RunConfig::layout)},
      {"data", string_field(&RunConfig::data)},
      {"trim", int_field(&RunConfig::trim)},
      {"frames", int_field(&RunConfig::frames)},
      {"feature_dim", int_field(&RunConfig::feature_dim)},
      {"heads", int_field(&RunConfig::heads)},
      {"lambda", real_field(&RunConfig::lambda)},
      {"hidden", int_field(&RunConfig::hidden)},
      {"lstm_layers", int_field(&RunConfig::lstm_layers)},
      {"predictor_hidden", int_field(&RunConfig::predictor_hidden)},
      {"classifier_hidden", int_field(&RunConfig::classifier_hidden)},
      {"relation_slope", real_field(&RunConfig::relation_slope)},
      {"ccrl_sequential", bool_field(&RunConfig::ccrl_sequential)},
      {"lr", real_field(&RunConfig::lr)},
      {"adam_beta1", real_field(&RunConfig::adam_beta1)},
      {"adam_beta2", real_field(&RunConfig::adam_beta2)},
      {"adam_epsilon", real_field(&RunConfig::adam_epsilon)},
      {"batch_size", int_field(&RunConfig::batch_size)},
      {"chunk_size", int_field(&RunConfig::chunk_size)},
      {"beta", real_field(&RunConfig::beta)},
      {"pretrain_epochs", int_field(&RunConfig::pretrain_epochs)},
      {"finetune_epochs", int_field(&RunConfig::finetune_epochs)},
      {"patience", int_field(&RunConfig::patience)},
      {"threads", int_field(&RunConfig::threads)},
      {"seed", seed_field()},
      {"identities", int_field(&RunConfig::identities)},
      {"sequences_per_identity", int_field(&RunConfig::sequences_per_identity)},
      {"test_sequences_per_identity", int_field(&RunConfig::test_sequences_per_identity)},
      {"noise", real_field(&RunConfig::noise)},
      {"amplitude", real_field(&RunConfig::amplitude)},
      {"cycle_frames", real_field(&RunConfig::cycle_frames)},
      {"motion", string_field(&RunConfig::motion)},
  };
  return table;
}

const Field& field(const std::string& key) {
  for (const auto& [name, f] : fields())
    if (name == key) return f;
  throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) { field(key).set(*this, value); }

std::string RunConfig::get(const std::string& key) const { return field(key).get(*this); }

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& entry : fields()) out.push_back(entry.first);
    return out;
  }();
  return names;
}

void RunConfig::apply_text(const std::string& content) {
  std::istringstream in(content);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string body = text::trim(line);
    if (body.empty() || body[0] == '#') continue;
    const auto eq = body.find('=');
    require(eq != std::string::npos, ErrorCode::ParseError,
            "config line " + std::to_string(number) + " is not key=value: " + body);
    set(text::trim(body.substr(0, eq)), text::trim(body.substr(eq + 1)));
  }
}

std::string RunConfig::to_text() const {
  std::string out;
  for (const auto& [name, f] : fields()) out += name + "=" + f.get(*this) + "\n";
  return out;
}

void RunConfig::validate() const {
  require(trim >= 0, ErrorCode::InvalidConfig, "trim must be non-negative");
  require(lr > 0, ErrorCode::InvalidConfig, "lr must be positive");
  require(beta >= 0, ErrorCode::InvalidConfig, "beta must be non-negative");
  require(motion == "gait" || motion == "linear", ErrorCode::InvalidConfig, "motion must be gait or linear");
  require(pretrain_epochs >= 0 && finetune_epochs >= 0, ErrorCode::InvalidConfig, "epochs must be non-negative");
  require(batch_size > 0 && chunk_size > 0 && threads > 0, ErrorCode::InvalidConfig,
          "batch_size, chunk_size and threads must be positive");
  model_config(2).validate();
}

ModelConfig RunConfig::model_config(int classes) const {
  ModelConfig m;
  m.layout = layout;
  m.frames = frames;
  m.feature_dim = feature_dim;
  m.heads = heads;
  m.fusion = lambda;
  m.hidden = hidden;
  m.lstm_layers = lstm_layers;
  m.predictor_hidden = predictor_hidden;
  m.classifier_hidden = classifier_hidden;
  m.classes = classes;
  m.relation_slope = relation_slope;
  m.ccrl_sequential = ccrl_sequential;
  return m;
}

TrainConfig RunConfig::pretrain_config() const {
  TrainConfig t;
  t.epochs = pretrain_epochs;
  t.batch_size = batch_size;
  t.chunk_size = chunk_size;
  t.threads = threads;
  t.adam = {lr, adam_beta1, adam_beta2, adam_epsilon};
  t.beta = beta;
  t.seed = seed;
  t.patience = patience;
  return t;
}

TrainConfig RunConfig::finetune_config() const {
  TrainConfig t = pretrain_config();
  t.epochs = finetune_epochs;
  t.seed = seed + 1;
  return t;
}

SynthConfig RunConfig::synth_config() const {
  SynthConfig s;
  s.layout = layout;
  s.num_identities = identities;
  s.sequences_per_identity = sequences_per_identity;
  s.test_sequences_per_identity = test_sequences_per_identity;
  s.frames = frames + 2 * trim;
  s.noise = noise;
  s.amplitude = amplitude;
  s.cycle_frames = cycle_frames;
  s.motion = motion == "linear" ? MotionModel::Linear : MotionModel::Gait;
  return s;
}

RunConfig load_run_config(const std::string& path) {
  RunConfig c;
  c.apply_text(text::read_file(path));
  return c;
}

}  // namespace skelgraph
