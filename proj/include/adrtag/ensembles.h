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

#ifndef ADRTAG_ENSEMBLES_H_
#define ADRTAG_ENSEMBLES_H_

#include <Eigen/Dense>
#include <filesystem>
#include <vector>

#include "adrtag/blstm.h"
#include "adrtag/crf.h"

namespace adrtag {

// Input for one sequence: CRF features and dense BLSTM vectors over the same
// tokenization.
struct EnsembleInput {
  std::vector<FeatureVector> features;
  Eigen::MatrixXd vectors;  // T x D
};

struct EnsembleExample {
  EnsembleInput input;
  std::vector<size_t> gold;
};

struct VotingEnsemble {
  CrfModel crf;
  BlstmModel blstm;
};

// Per-token argmax of the averaged distributions; ties go to the lower index.
std::vector<size_t> vote(const Eigen::MatrixXd& p_crf, const Eigen::MatrixXd& p_blstm);

// Throws ConfigError when the components disagree on the label order.
void check_same_labels(const CrfModel& crf, const BlstmModel& blstm);

Eigen::MatrixXd voting_probabilities(const VotingEnsemble& ensemble, const EnsembleInput& input);
std::vector<size_t> voting_predict(const VotingEnsemble& ensemble, const EnsembleInput& input);

// Trains the CRF and the BLSTM independently on the same data.
VotingEnsemble voting_train(const LabelSet& labels, const std::vector<EnsembleExample>& train,
                            const std::vector<EnsembleExample>& validation,
                            const CrfConfig& crf_config, const BlstmConfig& blstm_config,
                            TrainingLog* blstm_log = nullptr);

// BLSTM reads [base vector; CRF marginals], so its input dimension is the
// base dimension plus the CRF label count.
struct StackedEnsemble {
  CrfModel crf;
  BlstmModel blstm;
  size_t base_dim = 0;
};

// Appends the CRF's per-token label distribution to every base vector.
Eigen::MatrixXd augment_with_marginals(const Eigen::MatrixXd& base, const Eigen::MatrixXd& marginals);
Eigen::MatrixXd stacked_inputs(const CrfModel& crf, const EnsembleInput& input);

// Stage one fits the CRF on `train`; stage two fits the BLSTM on vectors
// augmented with that CRF's marginals for both sets.
StackedEnsemble stacked_train(const LabelSet& labels, const std::vector<EnsembleExample>& train,
                              const std::vector<EnsembleExample>& validation,
                              const CrfConfig& crf_config, const BlstmConfig& blstm_config,
                              TrainingLog* blstm_log = nullptr);

Eigen::MatrixXd stacked_probabilities(const StackedEnsemble& ensemble, const EnsembleInput& input);
std::vector<size_t> stacked_predict(const StackedEnsemble& ensemble, const EnsembleInput& input);

// Manifest "adrtag-ensemble 1", "kind voting|stacked", "base_dim N",
// "crf <file>", "blstm <file>", then the label order. Component files are
// written next to the manifest.
void save_voting(const VotingEnsemble& ensemble, const std::filesystem::path& manifest);
VotingEnsemble load_voting(const std::filesystem::path& manifest);
void save_stacked(const StackedEnsemble& ensemble, const std::filesystem::path& manifest);
StackedEnsemble load_stacked(const std::filesystem::path& manifest);

}  // namespace adrtag

#endif  // ADRTAG_ENSEMBLES_H_
