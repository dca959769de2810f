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

#ifndef SKELGRAPH_OPTIMIZER_HPP
#define SKELGRAPH_OPTIMIZER_HPP

#include <cstdint>

#include "skelgraph/parameters.hpp"

namespace skelgraph {

struct AdamConfig {
  double lr = 0.005;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamConfig config;
  std::int64_t step = 0;
  GradientList first;   // m, one per store entry
  GradientList second;  // v
};

/// Zeroed moments shaped like the store.
AdamState make_adam(const ParameterStore& store, const AdamConfig& config = {});

/// Bias-corrected Adam update from the store's gradient slots.
void adam_step(AdamState& state, ParameterStore& store);

}  // namespace skelgraph

#endif  // SKELGRAPH_OPTIMIZER_HPP
