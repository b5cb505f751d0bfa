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

#ifndef ADRTAG_EMBEDDINGS_H_
#define ADRTAG_EMBEDDINGS_H_

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace adrtag {

// Vocabulary plus one dense row per word.
class WordVectors {
 public:
  WordVectors() = default;
  WordVectors(std::vector<std::string> words, Eigen::MatrixXd vectors);

  size_t size() const { return words_.size(); }
  size_t dim() const { return static_cast<size_t>(vectors_.cols()); }
  const std::vector<std::string>& words() const { return words_; }
  const Eigen::MatrixXd& matrix() const { return vectors_; }
  Eigen::MatrixXd& matrix() { return vectors_; }
  std::optional<size_t> index_of(const std::string& word) const;
  bool contains(const std::string& word) const { return index_of(word).has_value(); }
  // Row for `word`, or nullopt when out of vocabulary.
  std::optional<Eigen::VectorXd> lookup(const std::string& word) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, size_t> index_;
  Eigen::MatrixXd vectors_;
};

// Text format: "<|V|> <d>" header, then "word v1 ... vd" per line. Values use
// the shortest round-trip decimal form, so save/load is bit-exact.
std::string format_word_vectors(const WordVectors& vectors);
WordVectors parse_word_vectors(std::string_view content);
void save_word_vectors(const WordVectors& vectors, const std::filesystem::path& path);
WordVectors load_word_vectors(const std::filesystem::path& path);

struct Word2VecConfig {
  size_t dim = 200;
  size_t window = 5;
  size_t negatives = 5;
  size_t min_count = 2;
  size_t epochs = 5;
  double learning_rate = 0.025;
  uint64_t seed = 1;
};

struct EmbeddingModel {
  WordVectors input;       // the word embeddings
  Eigen::MatrixXd output;  // |V| x d context (negative-sampling) vectors
  std::vector<uint64_t> counts;
  Word2VecConfig config;
  std::vector<double> epoch_loss;  // mean loss per training example
};

// Words with count >= min_count, ordered by descending count then spelling.
std::vector<std::pair<std::string, uint64_t>> build_vocabulary(
    const std::vector<std::vector<std::string>>& sentences, size_t min_count);

// Positions max(0, i - window) .. min(n - 1, i + window), excluding i.
std::vector<size_t> context_positions(size_t i, size_t n, size_t window);

// One CBOW training case: context word ids predicting `center` against
// sampled noise words.
struct CbowExample {
  std::vector<size_t> context;
  size_t center = 0;
  std::vector<size_t> negatives;
};

// -log s(u_center . h) - sum_n log s(-u_n . h), h = mean of context input rows.
double cbow_loss(const EmbeddingModel& model, const CbowExample& example);

struct CbowGradient {
  Eigen::MatrixXd input;   // same shape as model.input.matrix()
  Eigen::MatrixXd output;  // same shape as model.output
};

double cbow_loss_and_gradient(const EmbeddingModel& model, const CbowExample& example,
                              CbowGradient* gradient);

// CBOW with negative sampling (unigram^0.75 noise), learning rate decaying
// linearly to lr/100 over all training examples. Single-threaded and
// reproducible for a given (sentence order, seed).
EmbeddingModel train_cbow(const std::vector<std::vector<std::string>>& sentences,
                          const Word2VecConfig& config);

// Initial parameters train_cbow starts from.
EmbeddingModel init_cbow(const std::vector<std::pair<std::string, uint64_t>>& vocabulary,
                         const Word2VecConfig& config);

double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct KMeansResult {
  Eigen::MatrixXd centroids;  // k x d
  std::vector<size_t> assignment;
  std::vector<double> inertia_history;  // after each assignment step
  size_t iterations = 0;
  double inertia() const { return inertia_history.empty() ? 0.0 : inertia_history.back(); }
};

// Lloyd's algorithm from a seeded k-means++ start. Stops at an assignment
// fixpoint or after `max_iterations` updates. Rows of `points` are samples.
KMeansResult kmeans_points(const Eigen::MatrixXd& points, size_t k, uint64_t seed,
                           size_t max_iterations = 100);

double inertia_of(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
                  const std::vector<size_t>& assignment);

struct ClusterModel {
  size_t k = 0;
  Eigen::MatrixXd centroids;
  std::unordered_map<std::string, size_t> assignment;
  std::vector<double> inertia_history;

  std::optional<size_t> cluster_of(const std::string& word) const;
};

// Throws ConfigError when the vocabulary is smaller than k.
ClusterModel kmeans(const WordVectors& vectors, size_t k = 50, uint64_t seed = 1);

// "CL=<id>" for clustered words, otherwise "LEMMA=<fallback_lemma>".
std::string cluster_feature(const std::string& word, const ClusterModel& clusters,
                            const std::string& fallback_lemma);

// "<k> <d>", k centroid rows, then "word<TAB>id" lines sorted by word.
std::string format_cluster_model(const ClusterModel& model);
ClusterModel parse_cluster_model(std::string_view content);
void save_cluster_model(const ClusterModel& model, const std::filesystem::path& path);
ClusterModel load_cluster_model(const std::filesystem::path& path);

}  // namespace adrtag

#endif  // ADRTAG_EMBEDDINGS_H_
