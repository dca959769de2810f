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

#include "skelgraph/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace skelgraph {

GradCheckReport finite_difference_check(const LossFunction& loss, ParameterStore& store,
                                        const GradCheckOptions& options) {
  require(options.step > 0 && options.tolerance > 0 && options.floor > 0, ErrorCode::InvalidConfig,
          "finite-difference step, tolerance and floor must be positive");
  GradCheckReport report;
  const double base = loss(store);
  const double h = options.step;
  for (auto& entry : store.entries()) {
    ParameterCheck check;
    check.name = entry.name;
    double worst_diff = 0;
    double scale = 0;
    for (Eigen::Index r = 0; r < entry.value.rows(); ++r) {
      for (Eigen::Index c = 0; c < entry.value.cols(); ++c) {
        double& x = entry.value(r, c);
        const double saved = x;
        x = saved + h;
        const double up = loss(store);
        x = saved - h;
        const double down = loss(store);
        x = saved;
        const double central = (up - down) / (2 * h);
        const double forward = (up - base) / h;
        const double backward = (base - down) / h;
        if (std::abs(forward - backward) > options.kink_margin * std::max(1.0, std::abs(central))) {
          ++check.flagged;
          continue;
        }
        const double analytic = entry.grad(r, c);
        const double diff = std::abs(analytic - central);
        worst_diff = std::max(worst_diff, diff);
        scale = std::max({scale, std::abs(analytic), std::abs(central)});
        check.max_elementwise_error = std::max(
            check.max_elementwise_error, diff / std::max({std::abs(analytic), std::abs(central), options.floor}));
        ++check.checked;
      }
    }
    check.max_relative_error = worst_diff / std::max(scale, options.floor);
    check.passed = check.max_relative_error < options.tolerance;
    report.max_relative_error = std::max(report.max_relative_error, check.max_relative_error);
    report.flagged += check.flagged;
    report.passed = report.passed && check.passed;
    report.parameters.push_back(std::move(check));
  }
  return report;
}

}  // namespace skelgraph
