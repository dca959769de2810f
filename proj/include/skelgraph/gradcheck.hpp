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

// Central finite-difference verification of analytic gradients.

#ifndef SKELGRAPH_GRADCHECK_HPP
#define SKELGRAPH_GRADCHECK_HPP

#include <functional>
#include <string>
#include <vector>

#include "skelgraph/parameters.hpp"

namespace skelgraph {

struct GradCheckOptions {
  double step = 1e-5;
  double tolerance = 1e-4;
  /// Denominator floor of the group error max|a - n| / max(max|a|, max|n|, floor).
  double floor = 1e-6;
  /// An element is flagged as a kink (and excluded) when its one-sided
  /// differences disagree by more than kink_margin * max(1, |central|).
  double kink_margin = 1e-3;
};

struct ParameterCheck {
  std::string name;
  /// max|a - n| over the group relative to the group's largest component.
  double max_relative_error = 0;
  /// Worst single-element |a - n| / max(|a|, |n|, floor); diagnostic only.
  double max_elementwise_error = 0;
  std::size_t checked = 0;
  std::size_t flagged = 0;
  bool passed = true;
};

struct GradCheckReport {
  std::vector<ParameterCheck> parameters;
  double max_relative_error = 0;
  std::size_t flagged = 0;
  bool passed = true;
};

using LossFunction = std::function<double(const ParameterStore&)>;

/// Compares the store's gradient slots against central differences of
/// `loss`, perturbing every element in place and restoring it afterwards.
GradCheckReport finite_difference_check(const LossFunction& loss, ParameterStore& store,
                                        const GradCheckOptions& options = {});

}  // namespace skelgraph

#endif  // SKELGRAPH_GRADCHECK_HPP
