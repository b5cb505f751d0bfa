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

#ifndef ADRTAG_TESTS_ORACLES_H_
#define ADRTAG_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "adrtag/blstm.h"
#include "adrtag/crf.h"
#include "adrtag/ensembles.h"
#include "adrtag/random.h"
#include "adrtag/synthetic.h"
#include "test_util.h"

namespace adrtag::testing {

inline double relative_error(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / std::max({floor, std::abs(a), std::abs(b)});
}

// 2 to 5 labels, always starting with O.
inline LabelSet labels_of_size(size_t n) {
  using C = EntityClass;
  std::vector<BioLabel> all = {BioLabel::outside(),
                               BioLabel::begin(C::kAdverseReaction),
                               BioLabel::inside(C::kAdverseReaction),
                               BioLabel::begin(C::kSeverity),
                               BioLabel::inside(C::kSeverity)};
  all.resize(n);
  return LabelSet(all);
}

inline std::string feature_key(size_t f) { return "f" + std::to_string(f); }

inline CrfModel random_crf(Rng& rng, size_t num_labels, size_t num_features,
                           double scale = 1.0, double l2_sigma = 10.0) {
  std::vector<std::string> names;
  for (size_t f = 0; f < num_features; ++f) names.push_back(feature_key(f));
  std::sort(names.begin(), names.end());
  CrfModel model(labels_of_size(num_labels), names, l2_sigma);
  Eigen::VectorXd w(model.num_parameters());
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = rng.uniform(-scale, scale);
  model.set_parameters(w);
  return model;
}

// Each token carries 1 to 3 model features, sometimes an unseen key.
inline std::vector<FeatureVector> random_crf_sequence(Rng& rng, size_t length,
                                                      size_t num_features) {
  std::vector<FeatureVector> seq(length);
  for (auto& fv : seq) {
    const size_t n = 1 + rng.below(3);
    for (size_t k = 0; k < n; ++k) fv.keys.push_back(feature_key(rng.below(num_features)));
    if (rng.below(4) == 0) fv.keys.push_back("unseen");
    std::sort(fv.keys.begin(), fv.keys.end());
    fv.keys.erase(std::unique(fv.keys.begin(), fv.keys.end()), fv.keys.end());
  }
  return seq;
}

struct BruteForce {
  double log_partition = 0;
  Eigen::MatrixXd marginals;
  double best_score = -std::numeric_limits<double>::infinity();
  std::vector<size_t> best_path;
};

// Enumerates all L^T label paths.
inline BruteForce brute_force_crf(const CrfModel& model, const std::vector<FeatureVector>& seq) {
  const size_t L = model.num_labels();
  const size_t T = seq.size();
  size_t total = 1;
  for (size_t t = 0; t < T; ++t) total *= L;
  std::vector<double> scores;
  std::vector<std::vector<size_t>> paths;
  BruteForce out;
  for (size_t code = 0; code < total; ++code) {
    std::vector<size_t> path(T);
    size_t rest = code;
    for (size_t t = T; t-- > 0;) {
      path[t] = rest % L;
      rest /= L;
    }
    const double s = score_path(model, seq, path);
    if (s > out.best_score) {
      out.best_score = s;
      out.best_path = path;
    }
    scores.push_back(s);
    paths.push_back(std::move(path));
  }
  const double m = *std::max_element(scores.begin(), scores.end());
  double z = 0;
  for (double s : scores) z += std::exp(s - m);
  out.log_partition = m + std::log(z);
  out.marginals = Eigen::MatrixXd::Zero(T, L);
  for (size_t p = 0; p < paths.size(); ++p) {
    const double prob = std::exp(scores[p] - out.log_partition);
    for (size_t t = 0; t < T; ++t) out.marginals(t, paths[p][t]) += prob;
  }
  return out;
}

// Largest per-coordinate relative error between the analytic CRF gradient
// and central differences.
inline double crf_gradient_error(const CrfModel& model, const std::vector<CrfInstance>& batch,
                                 double h = 1e-5) {
  Eigen::VectorXd analytic;
  nll_and_gradient(model, batch, &analytic);
  const Eigen::VectorXd w = model.parameters();
  CrfModel probe = model;
  double worst = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    Eigen::VectorXd v = w;
    v[i] = w[i] + h;
    probe.set_parameters(v);
    const double up = nll_and_gradient(probe, batch, nullptr);
    v[i] = w[i] - h;
    probe.set_parameters(v);
    const double down = nll_and_gradient(probe, batch, nullptr);
    worst = std::max(worst, relative_error((up - down) / (2 * h), analytic[i], 1e-7));
  }
  return worst;
}

inline BlstmModel random_blstm(Rng& rng, size_t num_labels, size_t input_dim, size_t hidden,
                               double scale = 0.5) {
  BlstmConfig config;
  config.hidden = hidden;
  BlstmModel model = init_blstm(labels_of_size(num_labels), input_dim, config);
  Eigen::VectorXd w(model.params.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = rng.uniform(-scale, scale);
  model.params.unflatten(w);
  return model;
}

inline Eigen::MatrixXd random_inputs(Rng& rng, size_t length, size_t dim) {
  Eigen::MatrixXd x(length, dim);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1, 1);
  return x;
}

inline double blstm_gradient_error(const BlstmModel& model, const std::vector<BlstmExample>& batch,
                                   double h = 1e-6) {
  BlstmParams grad = model.params.zeros_like();
  blstm_loss_and_gradient(model, batch, nullptr, &grad);
  const Eigen::VectorXd analytic = grad.flatten();
  const Eigen::VectorXd w = model.params.flatten();
  BlstmModel probe = model;
  double worst = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    Eigen::VectorXd v = w;
    v[i] = w[i] + h;
    probe.params.unflatten(v);
    const double up = blstm_loss_and_gradient(probe, batch, nullptr, nullptr);
    v[i] = w[i] - h;
    probe.params.unflatten(v);
    const double down = blstm_loss_and_gradient(probe, batch, nullptr, nullptr);
    worst = std::max(worst, relative_error((up - down) / (2 * h), analytic[i], 1e-7));
  }
  return worst;
}

// The bundled overfit corpus: "word<TAB>label" lines, blank line between
// sequences.
struct LabeledSequence {
  std::vector<std::string> words;
  std::vector<std::string> labels;
};

inline std::vector<LabeledSequence> load_overfit_corpus() {
  const std::string text = read_text(source_dir() / "data" / "overfit" / "sequences.tsv");
  std::vector<LabeledSequence> out(1);
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) {
      if (!out.back().words.empty()) out.emplace_back();
      continue;
    }
    const size_t tab = line.find('\t');
    out.back().words.push_back(line.substr(0, tab));
    out.back().labels.push_back(line.substr(tab + 1));
  }
  if (out.back().words.empty()) out.pop_back();
  return out;
}

// CRF features (current and neighbouring words) and random word vectors for
// the overfit corpus, over the five ADR/Severity labels.
struct OverfitData {
  LabelSet labels = labels_of_size(5);
  std::vector<CrfInstance> crf;
  std::vector<BlstmExample> blstm;
  std::vector<EnsembleExample> ensemble;
};

inline OverfitData overfit_data(size_t vector_dim = 12, uint64_t seed = 3) {
  OverfitData data;
  const auto corpus = load_overfit_corpus();
  std::vector<std::string> vocab;
  for (const auto& s : corpus) vocab.insert(vocab.end(), s.words.begin(), s.words.end());
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
  const WordVectors vectors = random_word_vectors(vocab, vector_dim, seed);
  for (const auto& s : corpus) {
    const size_t T = s.words.size();
    std::vector<FeatureVector> features(T);
    Eigen::MatrixXd x(T, vector_dim);
    std::vector<size_t> gold;
    for (size_t t = 0; t < T; ++t) {
      auto& keys = features[t].keys;
      keys.push_back("BIAS");
      keys.push_back("0:W=" + s.words[t]);
      if (t > 0) keys.push_back("-1:W=" + s.words[t - 1]);
      if (t + 1 < T) keys.push_back("1:W=" + s.words[t + 1]);
      std::sort(keys.begin(), keys.end());
      x.row(t) = *vectors.lookup(s.words[t]);
      gold.push_back(data.labels.index_of(parse_label(s.labels[t])));
    }
    data.crf.push_back({features, gold});
    data.blstm.push_back({x, gold});
    data.ensemble.push_back({{features, x}, gold});
  }
  return data;
}

inline BlstmConfig overfit_blstm_config() {
  BlstmConfig config;
  config.hidden = 16;
  config.learning_rate = 1e-2;
  config.epochs = 200;
  config.patience = 200;
  config.batch_size = 4;
  config.dropout = 0.0;
  config.seed = 7;
  return config;
}

inline double accuracy(const std::vector<std::vector<size_t>>& gold,
                       const std::vector<std::vector<size_t>>& predicted) {
  size_t hit = 0, total = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    for (size_t t = 0; t < gold[i].size(); ++t) {
      hit += gold[i][t] == predicted[i][t];
      ++total;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(total);
}

// Mean pairwise cosine within each topic minus mean cosine across topics.
struct TopicMargin {
  double intra = 0;
  double inter = 0;
  double margin() const { return intra - inter; }
};

inline TopicMargin topic_margin(const WordVectors& vectors, const TopicCorpus& corpus) {
  auto mean_cos = [&](const std::vector<std::string>& a, const std::vector<std::string>& b,
                      bool same) {
    double sum = 0;
    size_t n = 0;
    for (size_t i = 0; i < a.size(); ++i) {
      for (size_t j = same ? i + 1 : 0; j < b.size(); ++j) {
        sum += cosine_similarity(*vectors.lookup(a[i]), *vectors.lookup(b[j]));
        ++n;
      }
    }
    return sum / static_cast<double>(n);
  };
  TopicMargin m;
  m.intra = 0.5 * (mean_cos(corpus.topic_a, corpus.topic_a, true) +
                   mean_cos(corpus.topic_b, corpus.topic_b, true));
  m.inter = mean_cos(corpus.topic_a, corpus.topic_b, false);
  return m;
}

inline Word2VecConfig topic_cbow_config() {
  Word2VecConfig config;
  config.dim = 20;
  config.window = 3;
  config.epochs = 5;
  config.min_count = 1;
  config.seed = 1;
  return config;
}

// Three unit squares around (0,0), (20,0) and (0,20), `per_blob` rows each.
inline Eigen::MatrixXd three_blobs(size_t per_blob, uint64_t seed) {
  const double centers[3][2] = {{0, 0}, {20, 0}, {0, 20}};
  Rng rng(seed);
  Eigen::MatrixXd p(3 * per_blob, 2);
  for (size_t b = 0; b < 3; ++b) {
    for (size_t i = 0; i < per_blob; ++i) {
      p(b * per_blob + i, 0) = centers[b][0] + rng.uniform(-1, 1);
      p(b * per_blob + i, 1) = centers[b][1] + rng.uniform(-1, 1);
    }
  }
  return p;
}

// True when the assignment is constant on each blob and differs across blobs.
inline bool recovers_blobs(const std::vector<size_t>& assignment, size_t per_blob) {
  for (size_t b = 0; b < 3; ++b) {
    for (size_t i = 0; i < per_blob; ++i) {
      if (assignment[b * per_blob + i] != assignment[b * per_blob]) return false;
    }
  }
  const size_t a = assignment[0], b = assignment[per_blob], c = assignment[2 * per_blob];
  return a != b && b != c && a != c;
}

}  // namespace adrtag::testing

#endif  // ADRTAG_TESTS_ORACLES_H_
