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

#include "skelgraph/optimizer.hpp"

#include <cmath>

namespace skelgraph {

AdamState make_adam(const ParameterStore& store, const AdamConfig& config) {
  require(config.lr > 0 && config.epsilon > 0, ErrorCode::InvalidConfig, "Adam needs positive lr and epsilon");
  require(config.beta1 >= 0 && config.beta1 < 1 && config.beta2 >= 0 && config.beta2 < 1, ErrorCode::InvalidConfig,
          "Adam betas must lie in [0, 1)");
  AdamState state;
  state.config = config;
  state.first = store.zero_gradients();
  state.second = store.zero_gradients();
  return state;
}

void adam_step(AdamState& state, ParameterStore& store) {
  require(state.first.size() == store.size() && state.second.size() == store.size(), ErrorCode::DimensionMismatch,
          "optimizer state does not match the parameter store");
  const AdamConfig& c = state.config;
  ++state.step;
  const double correct1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
  const double correct2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));
  for (std::size_t k = 0; k < store.size(); ++k) {
    ParameterEntry& e = store[k];
    MatrixXd& m = state.first[k];
    MatrixXd& v = state.second[k];
    m = c.beta1 * m + (1.0 - c.beta1) * e.grad;
    v = c.beta2 * v + (1.0 - c.beta2) * e.grad.cwiseAbs2();
    e.value.array() -= c.lr * (m.array() / correct1) / ((v.array() / correct2).sqrt() + c.epsilon);
  }
}

}  // namespace skelgraph
