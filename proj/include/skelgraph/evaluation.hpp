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

// Closed-set multi-shot identification metrics.

#ifndef SKELGRAPH_EVALUATION_HPP
#define SKELGRAPH_EVALUATION_HPP

#include <string>
#include <vector>

#include "skelgraph/common.hpp"

namespace skelgraph {

/// CMC values in percent at ranks 1..C.
using CmcCurve = std::vector<double>;

/// 1-based rank of class `label` (1-based) in a score row: classes scoring
/// higher, or equal with a lower index, come first.
int rank_of(const Eigen::Ref<const VectorXd>& scores, int label);

/// Percentage of probes whose true class ranks within r, for r = 1..C.
CmcCurve cmc(const MatrixXd& scores, const IndexList& labels);
double rank1(const CmcCurve& curve);
/// Mean of the curve over its C ranks.
double nauc(const CmcCurve& curve);

struct EvaluationReport {
  int probes = 0;
  int classes = 0;
  double rank1 = 0;
  double nauc = 0;
  CmcCurve curve;
};

EvaluationReport evaluate_scores(const MatrixXd& scores, const IndexList& labels);

/// `probes,classes,rank1,nauc` header and row, then `rank,value` rows.
std::string format_report(const EvaluationReport& report);

}  // namespace skelgraph

#endif  // SKELGRAPH_EVALUATION_HPP
