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

#ifndef ADRTAG_CRF_H_
#define ADRTAG_CRF_H_

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "adrtag/features.h"
#include "adrtag/tokenization.h"

namespace adrtag {

// Linear-chain CRF over binary string features:
//   score(x, y) = sum_t unary(x_t, y_t) + sum_{t>0} trans(y_{t-1}, y_t).
// Features never seen in training carry zero weight.
class CrfModel {
 public:
  CrfModel() = default;
  CrfModel(LabelSet labels, std::vector<std::string> features, double l2_sigma = 10.0);

  const LabelSet& labels() const { return labels_; }
  size_t num_labels() const { return labels_.size(); }
  size_t num_features() const { return features_.size(); }
  const std::vector<std::string>& features() const { return features_; }
  double l2_sigma() const { return l2_sigma_; }
  // Index of a feature key, or -1 when unknown.
  long feature_id(const std::string& key) const;

  // F x L and L x L weight blocks.
  Eigen::MatrixXd& unary() { return unary_; }
  const Eigen::MatrixXd& unary() const { return unary_; }
  Eigen::MatrixXd& transitions() { return transitions_; }
  const Eigen::MatrixXd& transitions() const { return transitions_; }

  // All weights as one vector: unary row-major by feature, then transitions
  // row-major by previous label.
  size_t num_parameters() const;
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& w);

 private:
  LabelSet labels_;
  std::vector<std::string> features_;
  std::unordered_map<std::string, long> feature_index_;
  Eigen::MatrixXd unary_;
  Eigen::MatrixXd transitions_;
  double l2_sigma_ = 10.0;
};

// Feature vectors resolved to model feature ids.
struct CompiledSequence {
  std::vector<std::vector<long>> feature_ids;
  size_t length() const { return feature_ids.size(); }
};

CompiledSequence compile(const CrfModel& model, const std::vector<FeatureVector>& features);

// T x L emission scores.
Eigen::MatrixXd emission_scores(const CrfModel& model, const CompiledSequence& seq);

double score_path(const CrfModel& model, const std::vector<FeatureVector>& features,
                  const std::vector<size_t>& labels);
double score_path(const CrfModel& model, const std::vector<FeatureVector>& features,
                  const std::vector<BioLabel>& labels);

struct ForwardBackwardResult {
  double log_partition = 0;
  Eigen::MatrixXd marginals;  // T x L, rows sum to one
};

ForwardBackwardResult forward_backward(const CrfModel& model,
                                       const std::vector<FeatureVector>& features);
ForwardBackwardResult forward_backward(const CrfModel& model, const CompiledSequence& seq);

// Argmax path; ties go to the lowest label index.
std::vector<size_t> viterbi(const CrfModel& model, const std::vector<FeatureVector>& features);
std::vector<size_t> viterbi(const CrfModel& model, const CompiledSequence& seq);

struct CrfInstance {
  std::vector<FeatureVector> features;
  std::vector<size_t> gold;  // label indices
};

// Regularized negative log-likelihood over the batch and its gradient in
// the parameters() layout.
double nll_and_gradient(const CrfModel& model, const std::vector<CrfInstance>& batch,
                        Eigen::VectorXd* gradient);

struct CrfConfig {
  double l2_sigma = 10.0;
  size_t max_iters = 200;
  double tolerance = 1e-4;  // on the gradient norm
  size_t memory = 10;       // L-BFGS history
};

struct CrfTrainingLog {
  std::vector<double> loss;  // one entry per accepted iteration, plus the start
  double final_gradient_norm = 0;
  size_t iterations = 0;
  bool converged = false;
};

// Creates a zero-weight model whose feature inventory is every key in `data`.
CrfModel init_crf(const LabelSet& labels, const std::vector<CrfInstance>& data, double l2_sigma);

// Minimizes the regularized NLL with L-BFGS and a backtracking (Armijo)
// line search. Deterministic.
CrfModel train_crf(const LabelSet& labels, const std::vector<CrfInstance>& data,
                   const CrfConfig& config, CrfTrainingLog* log = nullptr);

// Versioned text format: header, label list, sigma, non-zero unary weights
// as "feature<TAB>label<TAB>weight", then transition rows.
std::string format_crf(const CrfModel& model);
CrfModel parse_crf(std::string_view content);
void save_crf(const CrfModel& model, const std::filesystem::path& path);
CrfModel load_crf(const std::filesystem::path& path);

}  // namespace adrtag

#endif  // ADRTAG_CRF_H_
