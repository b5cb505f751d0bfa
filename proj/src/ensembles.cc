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
#include "adrtag/numeric_io.h"
#include "file_util.h"

namespace adrtag {
namespace {

std::vector<CrfInstance> crf_instances(const std::vector<EnsembleExample>& data) {
  std::vector<CrfInstance> out;
  out.reserve(data.size());
  for (const auto& ex : data) {
    if (!ex.gold.empty()) out.push_back({ex.input.features, ex.gold});
  }
  return out;
}

std::vector<BlstmExample> blstm_examples(const std::vector<EnsembleExample>& data) {
  std::vector<BlstmExample> out;
  out.reserve(data.size());
  for (const auto& ex : data) out.push_back({ex.input.vectors, ex.gold});
  return out;
}

struct Manifest {
  std::string kind;
  size_t base_dim = 0;
  std::filesystem::path crf;
  std::filesystem::path blstm;
  std::vector<std::string> labels;
};

void write_manifest(const std::filesystem::path& path, std::string_view kind, size_t base_dim,
                    const LabelSet& labels) {
  const std::string stem = path.stem().string();
  std::string out = "adrtag-ensemble 1\n";
  out += "kind " + std::string(kind) + "\n";
  out += "base_dim " + std::to_string(base_dim) + "\n";
  out += "crf " + stem + ".crf\n";
  out += "blstm " + stem + ".blstm\n";
  out += "labels " + std::to_string(labels.size()) + "\n";
  for (const auto& n : labels.names()) out += n + "\n";
  internal::write_file(path, out);
}

Manifest read_manifest(const std::filesystem::path& path, std::string_view expected_kind) {
  auto content = internal::read_file(path);
  auto lines = internal::split_lines(content);
  Manifest m;
  size_t i = 0;
  auto field = [&](std::string_view key) {
    if (i >= lines.size()) throw ValidationError("ensemble manifest truncated");
    auto parts = internal::split(lines[i++], ' ');
    if (parts.size() != 2 || parts[0] != key) {
      throw ValidationError("ensemble manifest: expected '" + std::string(key) + "'");
    }
    return std::string(parts[1]);
  };
  if (field("adrtag-ensemble") != "1") throw ValidationError("unsupported ensemble manifest version");
  m.kind = field("kind");
  if (m.kind != expected_kind) {
    throw ValidationError("ensemble manifest is '" + m.kind + "', expected '" +
                          std::string(expected_kind) + "'");
  }
  m.base_dim = static_cast<size_t>(parse_int(field("base_dim")));
  m.crf = path.parent_path() / field("crf");
  m.blstm = path.parent_path() / field("blstm");
  const auto n = static_cast<size_t>(parse_int(field("labels")));
  for (size_t k = 0; k < n; ++k) {
    if (i >= lines.size()) throw ValidationError("ensemble manifest truncated");
    m.labels.emplace_back(lines[i++]);
  }
  return m;
}

void check_manifest_labels(const Manifest& m, const CrfModel& crf, const BlstmModel& blstm) {
  check_same_labels(crf, blstm);
  if (crf.labels().names() != m.labels) {
    throw ConfigError("ensemble manifest label order differs from its component models");
  }
}

}  // namespace

void check_same_labels(const CrfModel& crf, const BlstmModel& blstm) {
  if (!(crf.labels() == blstm.labels)) {
    throw ConfigError("CRF and BLSTM components use different label sets");
  }
}

std::vector<size_t> vote(const Eigen::MatrixXd& p_crf, const Eigen::MatrixXd& p_blstm) {
  if (p_crf.rows() != p_blstm.rows() || p_crf.cols() != p_blstm.cols()) {
    throw ConfigError("voting components disagree on sequence length or label count");
  }
  return argmax_rows(0.5 * (p_crf + p_blstm));
}

Eigen::MatrixXd voting_probabilities(const VotingEnsemble& ensemble, const EnsembleInput& input) {
  check_same_labels(ensemble.crf, ensemble.blstm);
  const auto fb = forward_backward(ensemble.crf, input.features);
  return 0.5 * (fb.marginals + blstm_predict(ensemble.blstm, input.vectors));
}

std::vector<size_t> voting_predict(const VotingEnsemble& ensemble, const EnsembleInput& input) {
  check_same_labels(ensemble.crf, ensemble.blstm);
  const auto fb = forward_backward(ensemble.crf, input.features);
  return vote(fb.marginals, blstm_predict(ensemble.blstm, input.vectors));
}

VotingEnsemble voting_train(const LabelSet& labels, const std::vector<EnsembleExample>& train,
                            const std::vector<EnsembleExample>& validation,
                            const CrfConfig& crf_config, const BlstmConfig& blstm_config,
                            TrainingLog* blstm_log) {
  VotingEnsemble e;
  e.crf = train_crf(labels, crf_instances(train), crf_config);
  e.blstm = train_blstm(labels, blstm_examples(train), blstm_examples(validation), blstm_config,
                        blstm_log);
  return e;
}

Eigen::MatrixXd augment_with_marginals(const Eigen::MatrixXd& base, const Eigen::MatrixXd& marginals) {
  if (base.rows() != marginals.rows()) {
    throw ConfigError("marginals and base vectors cover different token counts");
  }
  Eigen::MatrixXd out(base.rows(), base.cols() + marginals.cols());
  out << base, marginals;
  return out;
}

Eigen::MatrixXd stacked_inputs(const CrfModel& crf, const EnsembleInput& input) {
  return augment_with_marginals(input.vectors, forward_backward(crf, input.features).marginals);
}

StackedEnsemble stacked_train(const LabelSet& labels, const std::vector<EnsembleExample>& train,
                              const std::vector<EnsembleExample>& validation,
                              const CrfConfig& crf_config, const BlstmConfig& blstm_config,
                              TrainingLog* blstm_log) {
  if (train.empty() || validation.empty()) {
    throw ValidationError("stacked training needs non-empty training and validation sets");
  }
  StackedEnsemble e;
  e.base_dim = static_cast<size_t>(train.front().input.vectors.cols());
  e.crf = train_crf(labels, crf_instances(train), crf_config);
  auto augment = [&](const std::vector<EnsembleExample>& data) {
    std::vector<BlstmExample> out;
    for (const auto& ex : data) {
      if (ex.gold.empty()) continue;
      out.push_back({stacked_inputs(e.crf, ex.input), ex.gold});
    }
    return out;
  };
  e.blstm = train_blstm(labels, augment(train), augment(validation), blstm_config, blstm_log);
  return e;
}

Eigen::MatrixXd stacked_probabilities(const StackedEnsemble& ensemble, const EnsembleInput& input) {
  check_same_labels(ensemble.crf, ensemble.blstm);
  if (static_cast<size_t>(input.vectors.cols()) != ensemble.base_dim) {
    throw ConfigError("stacked ensemble expects " + std::to_string(ensemble.base_dim) +
                      "-dim base vectors");
  }
  return blstm_predict(ensemble.blstm, stacked_inputs(ensemble.crf, input));
}

std::vector<size_t> stacked_predict(const StackedEnsemble& ensemble, const EnsembleInput& input) {
  return argmax_rows(stacked_probabilities(ensemble, input));
}

void save_voting(const VotingEnsemble& ensemble, const std::filesystem::path& manifest) {
  check_same_labels(ensemble.crf, ensemble.blstm);
  write_manifest(manifest, "voting", ensemble.blstm.input_dim, ensemble.crf.labels());
  const std::string stem = manifest.stem().string();
  save_crf(ensemble.crf, manifest.parent_path() / (stem + ".crf"));
  save_blstm(ensemble.blstm, manifest.parent_path() / (stem + ".blstm"));
}

VotingEnsemble load_voting(const std::filesystem::path& manifest) {
  Manifest m = read_manifest(manifest, "voting");
  VotingEnsemble e{load_crf(m.crf), load_blstm(m.blstm)};
  check_manifest_labels(m, e.crf, e.blstm);
  return e;
}

void save_stacked(const StackedEnsemble& ensemble, const std::filesystem::path& manifest) {
  check_same_labels(ensemble.crf, ensemble.blstm);
  write_manifest(manifest, "stacked", ensemble.base_dim, ensemble.crf.labels());
  const std::string stem = manifest.stem().string();
  save_crf(ensemble.crf, manifest.parent_path() / (stem + ".crf"));
  save_blstm(ensemble.blstm, manifest.parent_path() / (stem + ".blstm"));
}

StackedEnsemble load_stacked(const std::filesystem::path& manifest) {
  Manifest m = read_manifest(manifest, "stacked");
  StackedEnsemble e{load_crf(m.crf), load_blstm(m.blstm), m.base_dim};
  check_manifest_labels(m, e.crf, e.blstm);
  if (e.blstm.input_dim != e.base_dim + e.crf.num_labels()) {
    throw ConfigError("stacked BLSTM input dimension does not equal base + label count");
  }
  return e;
}

}  // namespace adrtag
