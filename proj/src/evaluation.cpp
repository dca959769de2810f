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

#include "skelgraph/evaluation.hpp"

#include "skelgraph/text.hpp"

namespace skelgraph {

int rank_of(const Eigen::Ref<const VectorXd>& scores, int label) {
  require(label >= 1 && label <= scores.size(), ErrorCode::InvalidLabel,
          "label " + std::to_string(label) + " outside 1.." + std::to_string(scores.size()));
  const int truth = label - 1;
  const double own = scores(truth);
  int rank = 1;
  for (int c = 0; c < scores.size(); ++c)
    if (scores(c) > own || (scores(c) == own && c < truth)) ++rank;
  return rank;
}

CmcCurve cmc(const MatrixXd& scores, const IndexList& labels) {
  require(scores.rows() > 0, ErrorCode::InvalidConfig, "no probes to evaluate");
  require(static_cast<Eigen::Index>(labels.size()) == scores.rows(), ErrorCode::DimensionMismatch,
          "one label per probe");
  const int classes = static_cast<int>(scores.cols());
  std::vector<int> hits(static_cast<std::size_t>(classes), 0);
  for (Eigen::Index i = 0; i < scores.rows(); ++i) ++hits[rank_of(scores.row(i).transpose(), labels[i]) - 1];
  CmcCurve curve(static_cast<std::size_t>(classes));
  int cumulative = 0;
  for (int r = 0; r < classes; ++r) {
    cumulative += hits[r];
    curve[r] = 100.0 * cumulative / static_cast<double>(scores.rows());
  }
  return curve;
}

double rank1(const CmcCurve& curve) {
  require(!curve.empty(), ErrorCode::InvalidConfig, "empty CMC curve");
  return curve.front();
}

double nauc(const CmcCurve& curve) {
  require(!curve.empty(), ErrorCode::InvalidConfig, "empty CMC curve");
  double total = 0;
  for (double v : curve) total += v;
  return total / static_cast<double>(curve.size());
}

EvaluationReport evaluate_scores(const MatrixXd& scores, const IndexList& labels) {
  EvaluationReport report;
  report.curve = cmc(scores, labels);
  report.probes = static_cast<int>(scores.rows());
  report.classes = static_cast<int>(scores.cols());
  report.rank1 = rank1(report.curve);
  report.nauc = nauc(report.curve);
  return report;
}

std::string format_report(const EvaluationReport& report) {
  std::string out = "probes,classes,rank1,nauc\n";
  out += std::to_string(report.probes) + "," + std::to_string(report.classes) + "," +
         text::format_double(report.rank1) + "," + text::format_double(report.nauc) + "\n";
  out += "rank,value\n";
  for (std::size_t r = 0; r < report.curve.size(); ++r)
    out += std::to_string(r + 1) + "," + text::format_double(report.curve[r]) + "\n";
  return out;
}

}  // namespace skelgraph
