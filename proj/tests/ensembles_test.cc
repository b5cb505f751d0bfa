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

#include "adrtag/ensembles.h"

#include "adrtag/errors.h"
#include "doctest.h"
#include "oracles.h"
#include "test_util.h"

namespace adrtag {
namespace {

TEST_CASE("vote averages then takes the argmax") {
  Eigen::MatrixXd a(2, 3), b(2, 3);
  a << 0.6, 0.3, 0.1,  //
      0.2, 0.2, 0.6;
  b << 0.0, 0.9, 0.1,  //
      0.6, 0.2, 0.2;
  // row 0: 0.30 0.60 0.10; row 1: 0.40 0.20 0.40 (tie, lower index)
  CHECK(vote(a, b) == std::vector<size_t>{1, 0});
  CHECK_THROWS_AS(vote(a, Eigen::MatrixXd::Zero(3, 3)), ConfigError);
}

TEST_CASE("components must share the label order") {
  Rng rng(1);
  const auto crf = testing::random_crf(rng, 3, 4);
  const auto same = testing::random_blstm(rng, 3, 2, 2);
  const auto other = testing::random_blstm(rng, 4, 2, 2);
  CHECK_NOTHROW(check_same_labels(crf, same));
  CHECK_THROWS_AS(check_same_labels(crf, other), ConfigError);
}

TEST_CASE("marginal augmentation") {
  Eigen::MatrixXd base = Eigen::MatrixXd::Ones(2, 3);
  Eigen::MatrixXd marg(2, 2);
  marg << 0.25, 0.75, 1.0, 0.0;
  const auto x = augment_with_marginals(base, marg);
  REQUIRE(x.cols() == 5);
  CHECK(x.leftCols(3) == base);
  CHECK(x.rightCols(2) == marg);
  CHECK_THROWS_AS(augment_with_marginals(base, Eigen::MatrixXd::Zero(3, 2)), ConfigError);
}

TEST_CASE("ensembles on the overfit corpus") {
  const auto data = testing::overfit_data();
  const auto blstm_config = testing::overfit_blstm_config();
  CrfConfig crf_config;
  crf_config.max_iters = 150;

  const auto plain = train_blstm(data.labels, data.blstm, data.blstm, blstm_config);
  const double plain_acc = token_accuracy(plain, data.blstm);

  const auto stacked = stacked_train(data.labels, data.ensemble, data.ensemble, crf_config, blstm_config);
  CHECK(stacked.base_dim == 12);
  CHECK(stacked.blstm.input_dim == 12 + data.labels.size());
  const auto voting = voting_train(data.labels, data.ensemble, data.ensemble, crf_config, blstm_config);

  std::vector<std::vector<size_t>> gold, s_pred, v_pred;
  for (const auto& ex : data.ensemble) {
    gold.push_back(ex.gold);
    s_pred.push_back(stacked_predict(stacked, ex.input));
    v_pred.push_back(voting_predict(voting, ex.input));
    const auto p = stacked_probabilities(stacked, ex.input);
    CHECK((p.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);
    const auto q = voting_probabilities(voting, ex.input);
    CHECK((q.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);
  }
  CHECK(testing::accuracy(gold, s_pred) >= plain_acc - 0.01);
  CHECK(testing::accuracy(gold, v_pred) >= 0.99);

  SUBCASE("persistence") {
    testing::TempDir dir("ens");
    save_stacked(stacked, dir.path() / "s.ens");
    save_voting(voting, dir.path() / "v.ens");
    const auto s2 = load_stacked(dir.path() / "s.ens");
    const auto v2 = load_voting(dir.path() / "v.ens");
    for (const auto& ex : data.ensemble) {
      CHECK(stacked_probabilities(s2, ex.input) == stacked_probabilities(stacked, ex.input));
      CHECK(voting_probabilities(v2, ex.input) == voting_probabilities(voting, ex.input));
    }
    CHECK_THROWS_AS(load_voting(dir.path() / "s.ens"), ValidationError);
    auto manifest = testing::read_text(dir.path() / "s.ens");
    manifest.replace(manifest.find("base_dim 12"), 11, "base_dim 10");
    testing::write_text(dir.path() / "bad.ens", manifest);
    CHECK_THROWS_AS(load_stacked(dir.path() / "bad.ens"), ConfigError);
  }

  SUBCASE("wrong vector width") {
    EnsembleInput narrow = data.ensemble[0].input;
    narrow.vectors = Eigen::MatrixXd::Zero(narrow.vectors.rows(), 5);
    CHECK_THROWS_AS(stacked_predict(stacked, narrow), ConfigError);
  }
}

TEST_CASE("stacked training rejects empty sets") {
  const auto data = testing::overfit_data();
  CHECK_THROWS_AS(stacked_train(data.labels, {}, data.ensemble, CrfConfig{}, BlstmConfig{}),
                  ValidationError);
}

}  // namespace
}  // namespace adrtag
