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

#include <cmath>

#include "doctest.h"
#include "test_support.hpp"

using namespace skelgraph;
using testing::random_matrix;

TEST_CASE("averaged prediction example") {
  const Mlp<MatrixXd> head{MatrixXd::Identity(2, 2), MatrixXd::Zero(1, 2), MatrixXd::Identity(2, 2),
                           MatrixXd::Zero(1, 2)};
  MatrixXd states(2, 2);
  states << 800, 0, 0, 800;
  const SequencePrediction p = predict_sequence(head, states);
  CHECK(p.per_frame(0, 0) == 1.0);
  CHECK(p.average(0) == 0.5);
  CHECK(p.average(1) == 0.5);
  CHECK(p.label == 1);
}

TEST_CASE("identical frames give the per-frame distribution") {
  Rng rng(81);
  const Mlp<MatrixXd> head{random_matrix(rng, 4, 5), random_matrix(rng, 1, 5), random_matrix(rng, 5, 3),
                           random_matrix(rng, 1, 3)};
  const MatrixXd state = random_matrix(rng, 1, 4);
  const SequencePrediction p = predict_sequence(head, MatrixXd(state.replicate(4, 1)));
  const VectorXd ref = testing::oracle::softmax(testing::oracle::mlp(head, state.row(0).transpose()));
  CHECK((p.average - ref).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::abs(p.average.sum() - 1) < 1e-12);
  MatrixXd shuffled = random_matrix(rng, 3, 4);
  const SequencePrediction a = predict_sequence(head, shuffled);
  shuffled.row(0).swap(shuffled.row(2));
  CHECK((a.average - predict_sequence(head, shuffled).average).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("cross entropy examples") {
  const MatrixXd uniform = MatrixXd::Constant(2, 4, 0.25);
  CHECK(scalar_value(cross_entropy(uniform, {1, 3}, 0.5)) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  MatrixXd onehot = MatrixXd::Zero(1, 3);
  onehot(0, 1) = 1;
  CHECK(scalar_value(cross_entropy(onehot, {2}, 1.0)) == 0.0);
  CHECK(std::isfinite(scalar_value(cross_entropy(onehot, {1}, 1.0))));
  CHECK_THROWS_AS(cross_entropy(onehot, {4}, 1.0), Error);
  const std::vector<MatrixXd> params = {MatrixXd::Constant(1, 2, 2.0), MatrixXd::Ones(3, 1)};
  CHECK(scalar_value(recognition_loss(onehot, {2}, params, 0.1)) == doctest::Approx(0.1 * 11));
}

TEST_CASE("model scores and objective match the oracle") {
  ModelConfig config = testing::tiny_config();
  const DatasetSplit data = testing::tiny_data("tiny6", 3, 2, 0, config.frames, 82);
  for (int seed = 1; seed <= 5; ++seed) {
    config.ccrl_sequential = seed % 2 == 0;
    const Model model(config, static_cast<std::uint64_t>(seed));
    const Network<MatrixXd> net = model.network();
    const Batch batch = make_batch(data.train, config.frames);
    const MatrixXd scores = model.scores(batch);
    double ce = 0;
    for (std::size_t i = 0; i < data.train.size(); ++i) {
      std::vector<VectorXd> reps;
      for (const auto& f : data.train[i].frames)
        reps.push_back(testing::oracle::frame_representation(net, model.layout(), config, f));
      VectorXd avg = VectorXd::Zero(config.classes);
      for (const VectorXd& h : testing::oracle::lstm(net.encoder, reps))
        avg += testing::oracle::softmax(testing::oracle::mlp(net.classifier, h)) / config.frames;
      CHECK((scores.row(static_cast<Eigen::Index>(i)).transpose() - avg).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(model.predict(data.train[i]).label == argmax_lowest(avg) + 1);
      ce -= std::log(avg(data.train[i].label - 1));
    }
    const double beta = 0.01;
    const double expected = ce / data.train.size() + beta * model.parameters().squared_norm();
    CHECK(std::abs(model.recognition_objective(batch, 1.0 / data.train.size(), beta) - expected) < 1e-10);
  }
}

TEST_CASE("labels outside the class range are rejected") {
  const ModelConfig config = testing::tiny_config();
  DatasetSplit data = testing::tiny_data("tiny6", 4, 1, 0, config.frames, 83);
  const Model model(config, 1);
  try {
    model.recognition_objective(make_batch(data.train, config.frames), 1.0, 0.0);
    FAIL("label 4 accepted with three classes");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidLabel);
  }
}

TEST_CASE("recognition gradients against finite differences") {
  const ModelConfig config = testing::tiny_config();
  const DatasetSplit data = testing::tiny_data("tiny6", 3, 1, 0, config.frames, 84);
  Model model(config, 5);
  const Batch batch = make_batch(data.train, config.frames);
  const auto report = testing::check_model_gradients(
      model, [&](const Model& m, GradientList* g) { return m.recognition_objective(batch, 1.0 / 3, 0.01, g); });
  for (const auto& p : report.parameters) INFO(p.name << " " << p.max_relative_error);
  CHECK(report.passed);
  CHECK(model.parameters().at("pred.w1").grad.cwiseAbs().maxCoeff() == doctest::Approx(0.02 * model.parameters().at("pred.w1").value.cwiseAbs().maxCoeff()));
}
