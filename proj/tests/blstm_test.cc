// Copyright 2026 The adrtag Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "adrtag/blstm.h"

#include <cmath>

#include "adrtag/errors.h"
#include "doctest.h"
#include "oracles.h"
#include "test_util.h"

namespace adrtag {
namespace {

using testing::random_blstm;
using testing::random_inputs;

TEST_CASE("zero parameters predict uniformly") {
  BlstmConfig config;
  config.hidden = 4;
  auto model = init_blstm(testing::labels_of_size(5), 3, config);
  model.params = model.params.zeros_like();
  Rng rng(1);
  const auto p = blstm_predict(model, random_inputs(rng, 6, 3));
  CHECK((p.array() - 0.2).abs().maxCoeff() < 1e-15);
}

TEST_CASE("initialization shapes and forget bias") {
  BlstmConfig config;
  config.hidden = 5;
  const auto model = init_blstm(testing::labels_of_size(3), 7, config);
  CHECK(model.params.forward.W.rows() == 20);
  CHECK(model.params.forward.W.cols() == 7);
  CHECK(model.params.backward.U.cols() == 5);
  CHECK(model.params.V.rows() == 3);
  CHECK(model.params.V.cols() == 10);
  CHECK(model.params.forward.b.segment(5, 5).isConstant(1.0));
  CHECK(model.params.forward.b.segment(0, 5).isZero());
  const double r = std::sqrt(6.0 / (7 + 5));
  CHECK(model.params.forward.W.cwiseAbs().maxCoeff() <= r);
  CHECK(model.params.size() == 2 * (20 * 7 + 20 * 5 + 20) + 3 * 10 + 3);
}

TEST_CASE("softmax rows sum to one") {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto model = random_blstm(rng, 2 + rng.below(4), 4, 3, 3.0);
    const auto p = blstm_predict(model, random_inputs(rng, 1 + rng.below(20), 4));
    CHECK((p.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("reversal symmetry") {
  Rng rng(9);
  const auto model = random_blstm(rng, 4, 3, 2);
  BlstmModel swapped = model;
  std::swap(swapped.params.forward, swapped.params.backward);
  // The projection reads [forward; backward], so swap its halves too.
  swapped.params.V.leftCols(2) = model.params.V.rightCols(2);
  swapped.params.V.rightCols(2) = model.params.V.leftCols(2);
  const auto x = random_inputs(rng, 5, 3);
  const Eigen::MatrixXd reversed = x.colwise().reverse();
  const auto p = blstm_predict(model, x);
  const auto q = blstm_predict(swapped, reversed);
  CHECK((p - Eigen::MatrixXd(q.colwise().reverse())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("length-one output depends only on that token") {
  Rng rng(4);
  const auto model = random_blstm(rng, 3, 4, 3);
  const auto x = random_inputs(rng, 1, 4);
  CHECK(blstm_predict(model, x).isApprox(blstm_predict(model, x)));
  CHECK(blstm_predict(model, x).rows() == 1);
}

TEST_CASE("BPTT gradient matches finite differences") {
  Rng rng(12);
  const auto model = random_blstm(rng, 3, 4, 3);
  std::vector<BlstmExample> batch = {{random_inputs(rng, 2, 4), {1, 2}}};
  CHECK(testing::blstm_gradient_error(model, batch) < 1e-3);
  batch.push_back({random_inputs(rng, 3, 4), {0, 0, 2}});
  CHECK(testing::blstm_gradient_error(model, batch) < 1e-3);
}

TEST_CASE("input vectors concatenate generic and target halves") {
  const WordVectors generic({"rash", "fever"}, Eigen::MatrixXd::Constant(2, 2, 1.0));
  const WordVectors target({"rash"}, Eigen::MatrixXd::Constant(1, 2, 2.0));
  const auto x = build_input_vectors({"rash", "Fever", "zzz"}, generic, target);
  REQUIRE(x.rows() == 3);
  REQUIRE(x.cols() == 4);
  CHECK(x.row(0) == Eigen::RowVector4d(1, 1, 2, 2));
  CHECK(x.row(1) == Eigen::RowVector4d(1, 1, 0, 0));
  CHECK(x.row(2).isZero());
  CHECK_NOTHROW(check_embedding_dims(generic, target, 2));
  CHECK_THROWS_AS(check_embedding_dims(generic, target, 200), ConfigError);
}

TEST_CASE("errors") {
  Rng rng(1);
  const auto model = random_blstm(rng, 3, 4, 2);
  CHECK_THROWS_AS(blstm_predict(model, Eigen::MatrixXd(0, 4)), ValidationError);
  CHECK_THROWS_AS(blstm_predict(model, Eigen::MatrixXd::Zero(2, 5)), ConfigError);
  BlstmConfig bad;
  bad.patience = 100;
  bad.epochs = 5;
  const std::vector<BlstmExample> one = {{random_inputs(rng, 2, 4), {0, 1}}};
  CHECK_THROWS_AS(train_blstm(model.labels, one, one, bad), ConfigError);
  CHECK_THROWS_AS(train_blstm(model.labels, {}, one, BlstmConfig{}), ValidationError);
}

TEST_CASE("overfits the small corpus and keeps the best epoch") {
  const auto data = testing::overfit_data();
  const auto config = testing::overfit_blstm_config();
  TrainingLog log;
  const auto model = train_blstm(data.labels, data.blstm, data.blstm, config, &log);
  CHECK(token_accuracy(model, data.blstm) >= 0.99);
  double best = 0;
  for (const auto& e : log.epochs) best = std::max(best, e.validation_f1);
  CHECK(log.best_validation_f1 == best);

  TrainingLog again;
  const auto model2 = train_blstm(data.labels, data.blstm, data.blstm, config, &again);
  CHECK(model2.params.flatten() == model.params.flatten());
  REQUIRE(again.epochs.size() == log.epochs.size());
  for (size_t i = 0; i < log.epochs.size(); ++i) {
    CHECK(again.epochs[i].train_loss == log.epochs[i].train_loss);
  }
}

TEST_CASE("patience zero stops after the first non-improving epoch") {
  const auto data = testing::overfit_data();
  auto config = testing::overfit_blstm_config();
  config.patience = 0;
  config.learning_rate = 1e-9;
  TrainingLog log;
  train_blstm(data.labels, data.blstm, data.blstm, config, &log);
  CHECK(log.stopped_early);
  CHECK(log.epochs.size() <= 2);
}

TEST_CASE("binary round trip") {
  Rng rng(6);
  const auto model = random_blstm(rng, 4, 3, 2);
  const auto bytes = serialize_blstm(model);
  CHECK(bytes.substr(0, 8) == "ADRBLSTM");
  const auto back = deserialize_blstm(bytes);
  CHECK(back.labels == model.labels);
  CHECK(back.params.flatten() == model.params.flatten());
  CHECK(back.hidden == 2);
  CHECK_THROWS_AS(deserialize_blstm(bytes.substr(0, bytes.size() - 3)), ValidationError);
  CHECK_THROWS_AS(deserialize_blstm("NOTBLSTM" + bytes.substr(8)), ValidationError);
  CHECK_THROWS_AS(deserialize_blstm(bytes + "x"), ValidationError);
}

}  // namespace
}  // namespace adrtag
