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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "adrtag/errors.h"
#include "adrtag/numeric_io.h"
#include "adrtag/random.h"
#include "file_util.h"

namespace adrtag {
namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(sigmoid(x)) without overflow for large |x|.
double log_sigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

// Cumulative unigram^0.75 table sampled by binary search.
class NoiseSampler {
 public:
  explicit NoiseSampler(const std::vector<uint64_t>& counts) {
    double total = 0;
    cumulative_.reserve(counts.size());
    for (uint64_t c : counts) {
      total += std::pow(static_cast<double>(c), 0.75);
      cumulative_.push_back(total);
    }
    for (auto& v : cumulative_) v /= total;
  }

  size_t sample(Rng& rng) const {
    const double u = rng.uniform();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) return cumulative_.size() - 1;
    return static_cast<size_t>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

Eigen::VectorXd context_mean(const EmbeddingModel& model, const std::vector<size_t>& context) {
  Eigen::VectorXd h = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.input.dim()));
  for (size_t c : context) h += model.input.matrix().row(static_cast<Eigen::Index>(c)).transpose();
  return h / static_cast<double>(context.size());
}

std::vector<std::string_view> fields_of(std::string_view line) {
  std::vector<std::string_view> out;
  for (auto f : internal::split(line, ' ')) {
    if (!f.empty()) out.push_back(f);
  }
  return out;
}

}  // namespace

WordVectors::WordVectors(std::vector<std::string> words, Eigen::MatrixXd vectors)
    : words_(std::move(words)), vectors_(std::move(vectors)) {
  if (static_cast<size_t>(vectors_.rows()) != words_.size()) {
    throw ConfigError("word vector matrix has " + std::to_string(vectors_.rows()) +
                      " rows for " + std::to_string(words_.size()) + " words");
  }
  for (size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], i).second) {
      throw ValidationError("duplicate word '" + words_[i] + "' in vocabulary");
    }
  }
}

std::optional<size_t> WordVectors::index_of(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Eigen::VectorXd> WordVectors::lookup(const std::string& word) const {
  auto i = index_of(word);
  if (!i) return std::nullopt;
  return vectors_.row(static_cast<Eigen::Index>(*i)).transpose();
}

std::string format_word_vectors(const WordVectors& vectors) {
  std::string out = std::to_string(vectors.size()) + " " + std::to_string(vectors.dim()) + "\n";
  for (size_t i = 0; i < vectors.size(); ++i) {
    out += vectors.words()[i];
    for (Eigen::Index j = 0; j < vectors.matrix().cols(); ++j) {
      out += ' ';
      out += format_double(vectors.matrix()(static_cast<Eigen::Index>(i), j));
    }
    out += '\n';
  }
  return out;
}

WordVectors parse_word_vectors(std::string_view content) {
  auto lines = internal::split_lines(content);
  if (lines.empty()) throw ValidationError("empty word vector file");
  auto header = fields_of(lines[0]);
  if (header.size() != 2) throw ValidationError("word vector header must be '<count> <dim>'");
  const auto n = static_cast<size_t>(parse_int(header[0]));
  const auto d = static_cast<size_t>(parse_int(header[1]));
  if (lines.size() < n + 1) {
    throw ValidationError("word vector file declares " + std::to_string(n) + " words but has " +
                          std::to_string(lines.size() - 1));
  }
  std::vector<std::string> words;
  words.reserve(n);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (size_t i = 0; i < n; ++i) {
    auto f = fields_of(lines[i + 1]);
    if (f.size() != d + 1) {
      throw ValidationError("word vector line " + std::to_string(i + 2) + " has " +
                            std::to_string(f.size() - 1) + " values, expected " +
                            std::to_string(d));
    }
    words.emplace_back(f[0]);
    for (size_t j = 0; j < d; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_double(f[j + 1]);
    }
  }
  return WordVectors(std::move(words), std::move(m));
}

void save_word_vectors(const WordVectors& vectors, const std::filesystem::path& path) {
  internal::write_file(path, format_word_vectors(vectors));
}

WordVectors load_word_vectors(const std::filesystem::path& path) {
  return parse_word_vectors(internal::read_file(path));
}

std::vector<std::pair<std::string, uint64_t>> build_vocabulary(
    const std::vector<std::vector<std::string>>& sentences, size_t min_count) {
  std::map<std::string, uint64_t> counts;
  for (const auto& s : sentences) {
    for (const auto& w : s) ++counts[w];
  }
  std::vector<std::pair<std::string, uint64_t>> vocab;
  for (auto& [w, c] : counts) {
    if (c >= min_count) vocab.emplace_back(w, c);
  }
  std::stable_sort(vocab.begin(), vocab.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return vocab;
}

std::vector<size_t> context_positions(size_t i, size_t n, size_t window) {
  std::vector<size_t> out;
  const size_t lo = i >= window ? i - window : 0;
  const size_t hi = std::min(n == 0 ? 0 : n - 1, i + window);
  for (size_t p = lo; p <= hi && p < n; ++p) {
    if (p != i) out.push_back(p);
  }
  return out;
}

double cbow_loss(const EmbeddingModel& model, const CbowExample& example) {
  return cbow_loss_and_gradient(model, example, nullptr);
}

double cbow_loss_and_gradient(const EmbeddingModel& model, const CbowExample& example,
                              CbowGradient* gradient) {
  if (example.context.empty()) throw ConfigError("CBOW example without context");
  const Eigen::VectorXd h = context_mean(model, example.context);
  const auto dim = static_cast<Eigen::Index>(model.input.dim());
  Eigen::VectorXd dh = Eigen::VectorXd::Zero(dim);
  if (gradient) {
    gradient->input = Eigen::MatrixXd::Zero(model.input.matrix().rows(), dim);
    gradient->output = Eigen::MatrixXd::Zero(model.output.rows(), dim);
  }
  double loss = 0;
  auto term = [&](size_t word, double label) {
    const auto row = static_cast<Eigen::Index>(word);
    const double score = model.output.row(row).dot(h);
    loss -= label > 0 ? log_sigmoid(score) : log_sigmoid(-score);
    if (gradient) {
      const double g = sigmoid(score) - label;  // d loss / d score
      gradient->output.row(row) += g * h.transpose();
      dh += g * model.output.row(row).transpose();
    }
  };
  term(example.center, 1.0);
  for (size_t n : example.negatives) term(n, 0.0);
  if (gradient) {
    const double share = 1.0 / static_cast<double>(example.context.size());
    for (size_t c : example.context) {
      gradient->input.row(static_cast<Eigen::Index>(c)) += share * dh.transpose();
    }
  }
  return loss;
}

EmbeddingModel init_cbow(const std::vector<std::pair<std::string, uint64_t>>& vocabulary,
                         const Word2VecConfig& config) {
  if (vocabulary.empty()) throw ConfigError("empty vocabulary after min_count filtering");
  if (config.dim == 0) throw ConfigError("embedding dimension must be positive");
  Rng rng(config.seed);
  const auto n = static_cast<Eigen::Index>(vocabulary.size());
  const auto d = static_cast<Eigen::Index>(config.dim);
  Eigen::MatrixXd input(n, d);
  const double r = 0.5 / static_cast<double>(config.dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) input(i, j) = rng.uniform(-r, r);
  }
  EmbeddingModel model;
  std::vector<std::string> words;
  for (const auto& [w, c] : vocabulary) {
    words.push_back(w);
    model.counts.push_back(c);
  }
  model.input = WordVectors(std::move(words), std::move(input));
  model.output = Eigen::MatrixXd::Zero(n, d);
  model.config = config;
  return model;
}

EmbeddingModel train_cbow(const std::vector<std::vector<std::string>>& sentences,
                          const Word2VecConfig& config) {
  if (config.window == 0) throw ConfigError("window must be positive");
  EmbeddingModel model = init_cbow(build_vocabulary(sentences, config.min_count), config);
  // Sentences as vocabulary ids; out-of-vocabulary words are removed first.
  std::vector<std::vector<size_t>> ids;
  uint64_t total_examples = 0;
  for (const auto& s : sentences) {
    std::vector<size_t> row;
    for (const auto& w : s) {
      if (auto i = model.input.index_of(w)) row.push_back(*i);
    }
    if (row.size() >= 2) {
      total_examples += row.size();
      ids.push_back(std::move(row));
    }
  }
  total_examples *= config.epochs;
  NoiseSampler noise(model.counts);
  Rng rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
  const auto dim = static_cast<Eigen::Index>(config.dim);
  const double lr0 = config.learning_rate;
  const double lr_min = lr0 / 100.0;
  uint64_t processed = 0;
  Eigen::VectorXd h(dim);
  Eigen::VectorXd dh(dim);
  auto& in = model.input.matrix();
  auto& out = model.output;
  for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
    double epoch_loss = 0;
    uint64_t epoch_examples = 0;
    for (const auto& sent : ids) {
      for (size_t i = 0; i < sent.size(); ++i) {
        const double progress =
            total_examples == 0 ? 0.0
                                : static_cast<double>(processed) / static_cast<double>(total_examples);
        const double lr = lr0 - (lr0 - lr_min) * progress;
        ++processed;
        auto positions = context_positions(i, sent.size(), config.window);
        h.setZero();
        for (size_t p : positions) h += in.row(static_cast<Eigen::Index>(sent[p])).transpose();
        h /= static_cast<double>(positions.size());
        dh.setZero();
        auto step = [&](size_t word, double label) {
          const auto row = static_cast<Eigen::Index>(word);
          const double score = out.row(row).dot(h);
          epoch_loss -= label > 0 ? log_sigmoid(score) : log_sigmoid(-score);
          const double g = sigmoid(score) - label;
          dh += g * out.row(row).transpose();
          out.row(row) -= lr * g * h.transpose();
        };
        step(sent[i], 1.0);
        for (size_t k = 0; k < config.negatives; ++k) {
          size_t neg = noise.sample(rng);
          if (neg == sent[i]) continue;
          step(neg, 0.0);
        }
        const double share = lr / static_cast<double>(positions.size());
        for (size_t p : positions) in.row(static_cast<Eigen::Index>(sent[p])) -= share * dh.transpose();
        ++epoch_examples;
      }
    }
    if (!std::isfinite(epoch_loss)) {
      throw TrainingError("non-finite CBOW loss in epoch " + std::to_string(epoch + 1));
    }
    model.epoch_loss.push_back(epoch_examples == 0 ? 0.0 : epoch_loss / epoch_examples);
  }
  return model;
}

double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0 || nb == 0) return 0;
  return a.dot(b) / (na * nb);
}

double inertia_of(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
                  const std::vector<size_t>& assignment) {
  double total = 0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    total += (points.row(i) - centroids.row(static_cast<Eigen::Index>(assignment[i]))).squaredNorm();
  }
  return total;
}

KMeansResult kmeans_points(const Eigen::MatrixXd& points, size_t k, uint64_t seed,
                           size_t max_iterations) {
  const auto n = static_cast<size_t>(points.rows());
  if (k == 0) throw ConfigError("k must be positive");
  if (n < k) {
    throw ConfigError("k-means needs at least k=" + std::to_string(k) + " points, got " +
                      std::to_string(n));
  }
  Rng rng(seed);
  KMeansResult result;
  result.centroids.resize(static_cast<Eigen::Index>(k), points.cols());

  // k-means++ seeding.
  std::vector<bool> chosen(n, false);
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  size_t first = rng.below(n);
  chosen[first] = true;
  result.centroids.row(0) = points.row(static_cast<Eigen::Index>(first));
  for (size_t c = 1; c < k; ++c) {
    double total = 0;
    for (size_t i = 0; i < n; ++i) {
      const double d = (points.row(static_cast<Eigen::Index>(i)) -
                        result.centroids.row(static_cast<Eigen::Index>(c - 1)))
                           .squaredNorm();
      dist[i] = std::min(dist[i], d);
      if (!chosen[i]) total += dist[i];
    }
    size_t pick = n;
    if (total > 0) {
      double target = rng.uniform() * total;
      for (size_t i = 0; i < n; ++i) {
        if (chosen[i]) continue;
        target -= dist[i];
        pick = i;
        if (target < 0) break;
      }
    } else {
      for (size_t i = 0; i < n && pick == n; ++i) {
        if (!chosen[i]) pick = i;
      }
    }
    chosen[pick] = true;
    result.centroids.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(pick));
  }

  auto assign = [&](std::vector<size_t>& out) {
    double total = 0;
    for (size_t i = 0; i < n; ++i) {
      size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (size_t c = 0; c < k; ++c) {
        const double d = (points.row(static_cast<Eigen::Index>(i)) -
                          result.centroids.row(static_cast<Eigen::Index>(c)))
                             .squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      out[i] = best;
      total += best_d;
    }
    return total;
  };

  result.assignment.assign(n, 0);
  result.inertia_history.push_back(assign(result.assignment));
  std::vector<size_t> next(n);
  while (result.iterations < max_iterations) {
    // Update step; an empty cluster keeps its previous centroid.
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), points.cols());
    std::vector<size_t> sizes(k, 0);
    for (size_t i = 0; i < n; ++i) {
      sums.row(static_cast<Eigen::Index>(result.assignment[i])) += points.row(static_cast<Eigen::Index>(i));
      ++sizes[result.assignment[i]];
    }
    for (size_t c = 0; c < k; ++c) {
      if (sizes[c] > 0) {
        result.centroids.row(static_cast<Eigen::Index>(c)) =
            sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(sizes[c]);
      }
    }
    ++result.iterations;
    const double inertia = assign(next);
    result.inertia_history.push_back(inertia);
    if (next == result.assignment) break;
    result.assignment.swap(next);
  }
  return result;
}

std::optional<size_t> ClusterModel::cluster_of(const std::string& word) const {
  auto it = assignment.find(word);
  if (it == assignment.end()) return std::nullopt;
  return it->second;
}

ClusterModel kmeans(const WordVectors& vectors, size_t k, uint64_t seed) {
  if (vectors.size() < k) {
    throw ConfigError("vocabulary of " + std::to_string(vectors.size()) +
                      " words is smaller than k=" + std::to_string(k));
  }
  KMeansResult r = kmeans_points(vectors.matrix(), k, seed);
  ClusterModel model;
  model.k = k;
  model.centroids = std::move(r.centroids);
  model.inertia_history = std::move(r.inertia_history);
  for (size_t i = 0; i < vectors.size(); ++i) model.assignment[vectors.words()[i]] = r.assignment[i];
  return model;
}

std::string cluster_feature(const std::string& word, const ClusterModel& clusters,
                            const std::string& fallback_lemma) {
  if (auto id = clusters.cluster_of(word)) return "CL=" + std::to_string(*id);
  return "LEMMA=" + fallback_lemma;
}

std::string format_cluster_model(const ClusterModel& model) {
  std::string out = std::to_string(model.k) + " " + std::to_string(model.centroids.cols()) + "\n";
  for (Eigen::Index c = 0; c < model.centroids.rows(); ++c) {
    for (Eigen::Index j = 0; j < model.centroids.cols(); ++j) {
      if (j > 0) out += ' ';
      out += format_double(model.centroids(c, j));
    }
    out += '\n';
  }
  std::map<std::string, size_t> sorted(model.assignment.begin(), model.assignment.end());
  for (const auto& [w, id] : sorted) out += w + "\t" + std::to_string(id) + "\n";
  return out;
}

ClusterModel parse_cluster_model(std::string_view content) {
  auto lines = internal::split_lines(content);
  if (lines.empty()) throw ValidationError("empty cluster file");
  auto header = fields_of(lines[0]);
  if (header.size() != 2) throw ValidationError("cluster header must be '<k> <dim>'");
  ClusterModel model;
  model.k = static_cast<size_t>(parse_int(header[0]));
  const auto d = static_cast<size_t>(parse_int(header[1]));
  if (lines.size() < model.k + 1) throw ValidationError("cluster file truncated");
  model.centroids.resize(static_cast<Eigen::Index>(model.k), static_cast<Eigen::Index>(d));
  for (size_t c = 0; c < model.k; ++c) {
    auto f = fields_of(lines[c + 1]);
    if (f.size() != d) throw ValidationError("centroid row " + std::to_string(c) + " malformed");
    for (size_t j = 0; j < d; ++j) {
      model.centroids(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j)) = parse_double(f[j]);
    }
  }
  for (size_t i = model.k + 1; i < lines.size(); ++i) {
    auto f = internal::split(lines[i], '\t');
    if (f.size() != 2) throw ValidationError("cluster assignment line malformed");
    const auto id = static_cast<size_t>(parse_int(f[1]));
    if (id >= model.k) throw ValidationError("cluster id out of range");
    model.assignment[std::string(f[0])] = id;
  }
  return model;
}

void save_cluster_model(const ClusterModel& model, const std::filesystem::path& path) {
  internal::write_file(path, format_cluster_model(model));
}

ClusterModel load_cluster_model(const std::filesystem::path& path) {
  return parse_cluster_model(internal::read_file(path));
}

}  // namespace adrtag
