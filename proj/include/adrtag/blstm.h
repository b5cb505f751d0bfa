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

#ifndef ADRTAG_BLSTM_H_
#define ADRTAG_BLSTM_H_

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "adrtag/embeddings.h"
#include "adrtag/tokenization.h"

namespace adrtag {

// One LSTM direction. Gate blocks are stacked in the order input, forget,
// output, cell candidate: W is 4H x D, U is 4H x H, b has 4H entries.
struct LstmDirectionParams {
  Eigen::MatrixXd W;
  Eigen::MatrixXd U;
  Eigen::VectorXd b;
};

struct BlstmParams {
  LstmDirectionParams forward;
  LstmDirectionParams backward;
  Eigen::MatrixXd V;  // L x 2H output projection
  Eigen::VectorXd c;  // L output bias

  // Same shapes, all zero.
  BlstmParams zeros_like() const;
  size_t size() const;
  // Calls fn on every parameter block in serialization order.
  template <typename Fn>
  void visit(Fn&& fn) {
    fn(forward.W), fn(forward.U), fn(forward.b);
    fn(backward.W), fn(backward.U), fn(backward.b);
    fn(V), fn(c);
  }
  template <typename Fn>
  void visit(Fn&& fn) const {
    fn(forward.W), fn(forward.U), fn(forward.b);
    fn(backward.W), fn(backward.U), fn(backward.b);
    fn(V), fn(c);
  }
  Eigen::VectorXd flatten() const;
  void unflatten(const Eigen::VectorXd& flat);
};

struct BlstmModel {
  LabelSet labels;
  size_t input_dim = 0;
  size_t hidden = 170;
  double dropout_rate = 0.1;
  BlstmParams params;

  size_t num_labels() const { return labels.size(); }
};

struct BlstmConfig {
  size_t hidden = 170;
  double learning_rate = 1e-5;
  size_t epochs = 50;
  size_t patience = 10;
  uint64_t seed = 1;
  size_t batch_size = 8;
  double dropout = 0.1;
  double rms_decay = 0.9;
  double rms_epsilon = 1e-8;
};

// Uniform(-r, r) with r = sqrt(6 / (fan_in + fan_out)); forget-gate bias 1.
BlstmModel init_blstm(const LabelSet& labels, size_t input_dim, const BlstmConfig& config);

struct BlstmExample {
  Eigen::MatrixXd inputs;  // T x D
  std::vector<size_t> gold;
};

// [generic(w); target(w)] per token, zero halves for out-of-vocabulary words.
// Words are looked up verbatim, then lowercased.
Eigen::MatrixXd build_input_vectors(const std::vector<std::string>& words,
                                    const WordVectors& generic, const WordVectors& target);
// Checks both models have the declared dimension; throws ConfigError if not.
void check_embedding_dims(const WordVectors& generic, const WordVectors& target,
                          size_t declared_dim);

// T x L softmax outputs with dropout off.
Eigen::MatrixXd blstm_predict(const BlstmModel& model, const Eigen::MatrixXd& inputs);
std::vector<size_t> argmax_rows(const Eigen::MatrixXd& probabilities);

// Inverted-dropout keep masks (already scaled by 1 / (1 - p)), T x H per
// direction. Null means no dropout.
struct DropoutMasks {
  Eigen::MatrixXd forward;
  Eigen::MatrixXd backward;
};

// Mean per-token cross-entropy over the batch and, if requested, its exact
// gradient by backpropagation through time.
double blstm_loss_and_gradient(const BlstmModel& model, const std::vector<BlstmExample>& batch,
                               const std::vector<DropoutMasks>* masks, BlstmParams* gradient);

struct EpochRecord {
  size_t epoch = 0;
  double train_loss = 0;
  double validation_f1 = 0;
};

struct TrainingLog {
  std::vector<EpochRecord> epochs;
  size_t best_epoch = 0;
  double best_validation_f1 = 0;
  bool stopped_early = false;
};

// Micro token F1 (percent) over non-O labels: a token counts as a true
// positive when gold and prediction are both non-O with the same class.
double token_micro_f1(const LabelSet& labels, const std::vector<std::vector<size_t>>& gold,
                      const std::vector<std::vector<size_t>>& predicted);
double token_accuracy(const BlstmModel& model, const std::vector<BlstmExample>& data);

// RMSprop with inverted dropout on each direction's hidden outputs and early
// stopping on validation micro token F1. Returns the best validation epoch's
// parameters. Deterministic for a given seed and data order.
BlstmModel train_blstm(const LabelSet& labels, const std::vector<BlstmExample>& train,
                       const std::vector<BlstmExample>& validation, const BlstmConfig& config,
                       TrainingLog* log = nullptr);

// Binary layout: 8-byte magic "ADRBLSTM", uint32 version, uint32 D, H, L,
// float64 dropout, L labels as (uint32 length, bytes), then float64 values
// of forward W, U, b, backward W, U, b, V, c, each row-major, little-endian.
void save_blstm(const BlstmModel& model, const std::filesystem::path& path);
BlstmModel load_blstm(const std::filesystem::path& path);
std::string serialize_blstm(const BlstmModel& model);
BlstmModel deserialize_blstm(std::string_view bytes);

}  // namespace adrtag

#endif  // ADRTAG_BLSTM_H_
