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

#include "adrtag/embeddings.h"

#include <cmath>

#include "adrtag/errors.h"
#include "adrtag/random.h"
#include "adrtag/synthetic.h"
#include "doctest.h"
#include "oracles.h"
#include "test_util.h"

namespace adrtag {
namespace {

EmbeddingModel toy_model(uint64_t seed) {
  Word2VecConfig config;
  config.dim = 6;
  config.seed = seed;
  std::vector<std::pair<std::string, uint64_t>> vocab;
  for (int i = 0; i < 7; ++i) vocab.push_back({"w" + std::to_string(i), 10 - i});
  auto model = init_cbow(vocab, config);
  Rng rng(seed + 7);
  for (Eigen::Index i = 0; i < model.output.size(); ++i) model.output.data()[i] = rng.uniform(-0.8, 0.8);
  for (Eigen::Index i = 0; i < model.input.matrix().size(); ++i) {
    model.input.matrix().data()[i] = rng.uniform(-0.8, 0.8);
  }
  return model;
}

double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({1e-6, std::abs(a), std::abs(b)});
}

TEST_CASE("vocabulary ordering and min_count") {
  const auto vocab = build_vocabulary({{"b", "a", "b", "c"}, {"a", "b", "d"}}, 2);
  REQUIRE(vocab.size() == 2);
  CHECK(vocab[0] == std::pair<std::string, uint64_t>{"b", 3});
  CHECK(vocab[1] == std::pair<std::string, uint64_t>{"a", 2});
}

TEST_CASE("context window positions") {
  CHECK(context_positions(0, 4, 2) == std::vector<size_t>{1, 2});
  CHECK(context_positions(3, 10, 2) == std::vector<size_t>{1, 2, 4, 5});
  CHECK(context_positions(0, 1, 5).empty());
}

TEST_CASE("cbow gradient matches finite differences") {
  const auto model = toy_model(3);
  const CbowExample ex{{1, 2, 4}, 0, {3, 5, 6}};
  CbowGradient g;
  const double loss = cbow_loss_and_gradient(model, ex, &g);
  CHECK(loss == doctest::Approx(cbow_loss(model, ex)));
  const double h = 1e-6;
  auto check = [&](bool input_side, Eigen::Index r, Eigen::Index c) {
    EmbeddingModel m = model;
    double& w = input_side ? m.input.matrix()(r, c) : m.output(r, c);
    const double w0 = w;
    w = w0 + h;
    const double up = cbow_loss(m, ex);
    w = w0 - h;
    const double down = cbow_loss(m, ex);
    const double numeric = (up - down) / (2 * h);
    const double analytic = input_side ? g.input(r, c) : g.output(r, c);
    CHECK(relative_error(numeric, analytic) < 1e-4);
  };
  for (Eigen::Index r = 0; r < 7; ++r) {
    for (Eigen::Index c = 0; c < 6; ++c) {
      check(true, r, c);
      check(false, r, c);
    }
  }
  CHECK(g.input.row(0).norm() == 0.0);  // center word is not a context word
}

TEST_CASE("cbow training is deterministic and lowers the loss") {
  const auto corpus = generate_topic_corpus(200, 8, 5);
  Word2VecConfig config;
  config.dim = 10;
  config.window = 2;
  config.epochs = 4;
  config.min_count = 1;
  const auto a = train_cbow(corpus.sentences, config);
  const auto b = train_cbow(corpus.sentences, config);
  CHECK(a.input.matrix() == b.input.matrix());
  REQUIRE(a.epoch_loss.size() == 4);
  CHECK(a.epoch_loss.back() < a.epoch_loss.front());
  config.seed = 2;
  CHECK_FALSE(train_cbow(corpus.sentences, config).input.matrix() == a.input.matrix());
}

TEST_CASE("cbow errors") {
  Word2VecConfig config;
  config.min_count = 5;
  CHECK_THROWS_AS(train_cbow({{"a", "b"}}, config), ConfigError);
}

TEST_CASE("word vectors save and load bit-exactly") {
  Eigen::MatrixXd m(2, 3);
  m << 0.1, -1.0 / 3.0, 1e-300, 2.5, 0, -7.25;
  WordVectors v({"rash", "fièvre"}, m);
  CHECK(v.lookup("fièvre")->isApprox(m.row(1).transpose()));
  CHECK_FALSE(v.lookup("none"));
  testing::TempDir dir("vec");
  save_word_vectors(v, dir.path() / "v.txt");
  const auto back = load_word_vectors(dir.path() / "v.txt");
  CHECK(back.words() == v.words());
  CHECK(back.matrix() == m);
  CHECK_THROWS_AS(parse_word_vectors("2 3\nrash 1 2 3\n"), ValidationError);
  CHECK_THROWS_AS(WordVectors({"a", "a"}, Eigen::MatrixXd::Zero(2, 1)), ValidationError);
}

TEST_CASE("cosine similarity") {
  Eigen::VectorXd a(2), b(2);
  a << 1, 0;
  b << 0, 3;
  CHECK(cosine_similarity(a, a) == doctest::Approx(1.0));
  CHECK(cosine_similarity(a, b) == doctest::Approx(0.0));
}

Eigen::MatrixXd blobs(size_t per_blob, uint64_t seed) { return testing::three_blobs(per_blob, seed); }

TEST_CASE("topic words end up closer to each other") {
  const auto corpus = generate_topic_corpus(400, 8, 2);
  const auto model = train_cbow(corpus.sentences, testing::topic_cbow_config());
  const auto m = testing::topic_margin(model.input, corpus);
  CHECK(m.margin() > 0);
}

TEST_CASE("k-means recovers separated blobs with monotone inertia") {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const auto points = blobs(30, seed);
    const auto r = kmeans_points(points, 3, seed);
    for (size_t i = 1; i < r.inertia_history.size(); ++i) {
      CHECK(r.inertia_history[i] <= r.inertia_history[i - 1] + 1e-12);
    }
    for (size_t b = 0; b < 3; ++b) {
      for (size_t i = 0; i < 30; ++i) CHECK(r.assignment[b * 30 + i] == r.assignment[b * 30]);
    }
    CHECK(r.assignment[0] != r.assignment[30]);
    CHECK(r.assignment[30] != r.assignment[60]);
    CHECK(r.assignment[0] != r.assignment[60]);
    CHECK(r.inertia() == doctest::Approx(inertia_of(points, r.centroids, r.assignment)));
  }
}

TEST_CASE("k-means edge cases") {
  Eigen::MatrixXd same = Eigen::MatrixXd::Ones(4, 2);
  const auto r = kmeans_points(same, 2, 1);
  CHECK(r.inertia() == 0.0);
  CHECK_THROWS_AS(kmeans_points(same, 5, 1), ConfigError);
  CHECK_THROWS_AS(kmeans_points(same, 0, 1), ConfigError);
}

TEST_CASE("cluster model and cluster feature") {
  std::vector<std::string> words;
  for (int i = 0; i < 90; ++i) words.push_back("w" + std::to_string(i));
  WordVectors v(words, blobs(30, 9));
  const auto model = kmeans(v, 3, 1);
  CHECK(model.cluster_of("w0") == model.cluster_of("w29"));
  CHECK(cluster_feature("w0", model, "w0") == "CL=" + std::to_string(*model.cluster_of("w0")));
  CHECK(cluster_feature("unseen", model, "unsee") == "LEMMA=unsee");
  CHECK_THROWS_AS(kmeans(v, 91, 1), ConfigError);
  testing::TempDir dir("clusters");
  save_cluster_model(model, dir.path() / "c.txt");
  const auto back = load_cluster_model(dir.path() / "c.txt");
  CHECK(back.k == 3);
  CHECK(back.assignment == model.assignment);
  CHECK(back.centroids == model.centroids);
}

}  // namespace
}  // namespace adrtag
