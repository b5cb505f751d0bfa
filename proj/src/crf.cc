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

#include "adrtag/crf.h"

#include <cmath>
#include <deque>
#include <limits>

#include "adrtag/errors.h"
#include "adrtag/numeric_io.h"
#include "file_util.h"

namespace adrtag {
namespace {

constexpr std::string_view kCrfMagic = "adrtag-crf";
constexpr int kCrfVersion = 1;

double log_sum_exp(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

std::vector<size_t> label_indices(const CrfModel& model, const std::vector<BioLabel>& labels) {
  std::vector<size_t> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(model.labels().index_of(l));
  return out;
}

struct Lattice {
  Eigen::MatrixXd emissions;
  Eigen::MatrixXd alpha;
  Eigen::MatrixXd beta;
  double log_z = 0;
};

Lattice run_lattice(const CrfModel& model, const CompiledSequence& seq) {
  const auto T = static_cast<Eigen::Index>(seq.length());
  if (T == 0) throw ValidationError("CRF inference on an empty sequence");
  const auto L = static_cast<Eigen::Index>(model.num_labels());
  const Eigen::MatrixXd& trans = model.transitions();
  Lattice lat;
  lat.emissions = emission_scores(model, seq);
  lat.alpha.resize(T, L);
  lat.beta.resize(T, L);
  lat.alpha.row(0) = lat.emissions.row(0);
  Eigen::VectorXd tmp(L);
  for (Eigen::Index t = 1; t < T; ++t) {
    for (Eigen::Index y = 0; y < L; ++y) {
      tmp = lat.alpha.row(t - 1).transpose() + trans.col(y);
      lat.alpha(t, y) = lat.emissions(t, y) + log_sum_exp(tmp);
    }
  }
  lat.beta.row(T - 1).setZero();
  for (Eigen::Index t = T - 2; t >= 0; --t) {
    for (Eigen::Index a = 0; a < L; ++a) {
      tmp = trans.row(a).transpose() + lat.emissions.row(t + 1).transpose() +
            lat.beta.row(t + 1).transpose();
      lat.beta(t, a) = log_sum_exp(tmp);
    }
  }
  lat.log_z = log_sum_exp(lat.alpha.row(T - 1).transpose());
  return lat;
}

Eigen::MatrixXd marginals_of(const Lattice& lat) {
  Eigen::MatrixXd m = (lat.alpha + lat.beta).array() - lat.log_z;
  m = m.array().exp();
  for (Eigen::Index t = 0; t < m.rows(); ++t) m.row(t) /= m.row(t).sum();
  return m;
}

Eigen::VectorXd flatten(const Eigen::MatrixXd& unary, const Eigen::MatrixXd& trans) {
  Eigen::VectorXd w(unary.size() + trans.size());
  Eigen::Index k = 0;
  for (Eigen::Index f = 0; f < unary.rows(); ++f) {
    for (Eigen::Index y = 0; y < unary.cols(); ++y) w(k++) = unary(f, y);
  }
  for (Eigen::Index a = 0; a < trans.rows(); ++a) {
    for (Eigen::Index b = 0; b < trans.cols(); ++b) w(k++) = trans(a, b);
  }
  return w;
}

}  // namespace

CrfModel::CrfModel(LabelSet labels, std::vector<std::string> features, double l2_sigma)
    : labels_(std::move(labels)), features_(std::move(features)), l2_sigma_(l2_sigma) {
  if (l2_sigma_ <= 0) throw ConfigError("l2_sigma must be positive");
  for (size_t i = 0; i < features_.size(); ++i) {
    if (!feature_index_.emplace(features_[i], static_cast<long>(i)).second) {
      throw ConfigError("duplicate CRF feature '" + features_[i] + "'");
    }
  }
  const auto L = static_cast<Eigen::Index>(labels_.size());
  unary_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(features_.size()), L);
  transitions_ = Eigen::MatrixXd::Zero(L, L);
}

long CrfModel::feature_id(const std::string& key) const {
  auto it = feature_index_.find(key);
  return it == feature_index_.end() ? -1 : it->second;
}

size_t CrfModel::num_parameters() const {
  return features_.size() * labels_.size() + labels_.size() * labels_.size();
}

Eigen::VectorXd CrfModel::parameters() const { return flatten(unary_, transitions_); }

void CrfModel::set_parameters(const Eigen::VectorXd& w) {
  if (static_cast<size_t>(w.size()) != num_parameters()) {
    throw ConfigError("CRF parameter vector has wrong size");
  }
  Eigen::Index k = 0;
  for (Eigen::Index f = 0; f < unary_.rows(); ++f) {
    for (Eigen::Index y = 0; y < unary_.cols(); ++y) unary_(f, y) = w(k++);
  }
  for (Eigen::Index a = 0; a < transitions_.rows(); ++a) {
    for (Eigen::Index b = 0; b < transitions_.cols(); ++b) transitions_(a, b) = w(k++);
  }
}

CompiledSequence compile(const CrfModel& model, const std::vector<FeatureVector>& features) {
  CompiledSequence seq;
  seq.feature_ids.reserve(features.size());
  for (const auto& fv : features) {
    std::vector<long> ids;
    ids.reserve(fv.keys.size());
    for (const auto& key : fv.keys) {
      long id = model.feature_id(key);
      if (id >= 0) ids.push_back(id);
    }
    seq.feature_ids.push_back(std::move(ids));
  }
  return seq;
}

Eigen::MatrixXd emission_scores(const CrfModel& model, const CompiledSequence& seq) {
  const auto T = static_cast<Eigen::Index>(seq.length());
  const auto L = static_cast<Eigen::Index>(model.num_labels());
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(T, L);
  for (Eigen::Index t = 0; t < T; ++t) {
    for (long f : seq.feature_ids[static_cast<size_t>(t)]) e.row(t) += model.unary().row(f);
  }
  return e;
}

double score_path(const CrfModel& model, const std::vector<FeatureVector>& features,
                  const std::vector<size_t>& labels) {
  if (features.size() != labels.size()) {
    throw ValidationError("score_path: " + std::to_string(labels.size()) + " labels for " +
                          std::to_string(features.size()) + " tokens");
  }
  for (size_t y : labels) {
    if (y >= model.num_labels()) throw ValidationError("score_path: unknown label index");
  }
  const CompiledSequence seq = compile(model, features);
  double score = 0;
  for (size_t t = 0; t < labels.size(); ++t) {
    for (long f : seq.feature_ids[t]) score += model.unary()(f, static_cast<Eigen::Index>(labels[t]));
    if (t > 0) {
      score += model.transitions()(static_cast<Eigen::Index>(labels[t - 1]),
                                   static_cast<Eigen::Index>(labels[t]));
    }
  }
  return score;
}

double score_path(const CrfModel& model, const std::vector<FeatureVector>& features,
                  const std::vector<BioLabel>& labels) {
  return score_path(model, features, label_indices(model, labels));
}

ForwardBackwardResult forward_backward(const CrfModel& model, const CompiledSequence& seq) {
  Lattice lat = run_lattice(model, seq);
  return {lat.log_z, marginals_of(lat)};
}

ForwardBackwardResult forward_backward(const CrfModel& model,
                                       const std::vector<FeatureVector>& features) {
  return forward_backward(model, compile(model, features));
}

std::vector<size_t> viterbi(const CrfModel& model, const CompiledSequence& seq) {
  const auto T = static_cast<Eigen::Index>(seq.length());
  if (T == 0) throw ValidationError("Viterbi on an empty sequence");
  const auto L = static_cast<Eigen::Index>(model.num_labels());
  const Eigen::MatrixXd e = emission_scores(model, seq);
  Eigen::MatrixXd delta(T, L);
  Eigen::MatrixXi back(T, L);
  delta.row(0) = e.row(0);
  for (Eigen::Index t = 1; t < T; ++t) {
    for (Eigen::Index y = 0; y < L; ++y) {
      Eigen::Index best = 0;
      double best_score = -std::numeric_limits<double>::infinity();
      for (Eigen::Index a = 0; a < L; ++a) {
        const double s = delta(t - 1, a) + model.transitions()(a, y);
        if (s > best_score) {
          best_score = s;
          best = a;
        }
      }
      delta(t, y) = best_score + e(t, y);
      back(t, y) = static_cast<int>(best);
    }
  }
  std::vector<size_t> path(static_cast<size_t>(T));
  Eigen::Index last = 0;
  for (Eigen::Index y = 1; y < L; ++y) {
    if (delta(T - 1, y) > delta(T - 1, last)) last = y;
  }
  path.back() = static_cast<size_t>(last);
  for (Eigen::Index t = T - 1; t > 0; --t) {
    path[static_cast<size_t>(t - 1)] = static_cast<size_t>(back(t, static_cast<Eigen::Index>(path[static_cast<size_t>(t)])));
  }
  return path;
}

std::vector<size_t> viterbi(const CrfModel& model, const std::vector<FeatureVector>& features) {
  return viterbi(model, compile(model, features));
}

double nll_and_gradient(const CrfModel& model, const std::vector<CrfInstance>& batch,
                        Eigen::VectorXd* gradient) {
  if (batch.empty()) throw ValidationError("empty CRF batch");
  const auto L = static_cast<Eigen::Index>(model.num_labels());
  Eigen::MatrixXd g_unary = Eigen::MatrixXd::Zero(model.unary().rows(), L);
  Eigen::MatrixXd g_trans = Eigen::MatrixXd::Zero(L, L);
  double loss = 0;
  for (const auto& inst : batch) {
    if (inst.gold.size() != inst.features.size()) {
      throw ValidationError("CRF instance has " + std::to_string(inst.gold.size()) +
                            " labels for " + std::to_string(inst.features.size()) + " tokens");
    }
    if (inst.features.empty()) continue;
    for (size_t y : inst.gold) {
      if (y >= model.num_labels()) throw ValidationError("gold label index out of range");
    }
    const CompiledSequence seq = compile(model, inst.features);
    const Lattice lat = run_lattice(model, seq);
    const auto T = static_cast<Eigen::Index>(seq.length());
    double gold_score = 0;
    for (Eigen::Index t = 0; t < T; ++t) {
      const auto y = static_cast<Eigen::Index>(inst.gold[static_cast<size_t>(t)]);
      gold_score += lat.emissions(t, y);
      if (t > 0) gold_score += model.transitions()(static_cast<Eigen::Index>(inst.gold[static_cast<size_t>(t - 1)]), y);
    }
    loss += lat.log_z - gold_score;
    if (!gradient) continue;
    const Eigen::MatrixXd marg = marginals_of(lat);
    for (Eigen::Index t = 0; t < T; ++t) {
      Eigen::VectorXd delta = marg.row(t).transpose();
      delta(static_cast<Eigen::Index>(inst.gold[static_cast<size_t>(t)])) -= 1.0;
      for (long f : seq.feature_ids[static_cast<size_t>(t)]) g_unary.row(f) += delta.transpose();
      if (t == 0) continue;
      // Pairwise marginals P(y_{t-1} = a, y_t = b).
      for (Eigen::Index a = 0; a < L; ++a) {
        for (Eigen::Index b = 0; b < L; ++b) {
          g_trans(a, b) += std::exp(lat.alpha(t - 1, a) + model.transitions()(a, b) +
                                    lat.emissions(t, b) + lat.beta(t, b) - lat.log_z);
        }
      }
      g_trans(static_cast<Eigen::Index>(inst.gold[static_cast<size_t>(t - 1)]),
              static_cast<Eigen::Index>(inst.gold[static_cast<size_t>(t)])) -= 1.0;
    }
  }
  const double inv_var = 1.0 / (model.l2_sigma() * model.l2_sigma());
  const Eigen::VectorXd w = model.parameters();
  loss += 0.5 * inv_var * w.squaredNorm();
  if (gradient) {
    *gradient = flatten(g_unary, g_trans) + inv_var * w;
  }
  return loss;
}

CrfModel init_crf(const LabelSet& labels, const std::vector<CrfInstance>& data, double l2_sigma) {
  std::vector<std::string> features;
  std::unordered_map<std::string, size_t> seen;
  for (const auto& inst : data) {
    for (const auto& fv : inst.features) {
      for (const auto& key : fv.keys) {
        if (seen.emplace(key, features.size()).second) features.push_back(key);
      }
    }
  }
  return CrfModel(labels, std::move(features), l2_sigma);
}

CrfModel train_crf(const LabelSet& labels, const std::vector<CrfInstance>& data,
                   const CrfConfig& config, CrfTrainingLog* log) {
  if (data.empty()) throw ValidationError("empty CRF training set");
  CrfModel model = init_crf(labels, data, config.l2_sigma);
  CrfTrainingLog local;
  CrfTrainingLog& out = log ? *log : local;
  out = {};

  Eigen::VectorXd w = model.parameters();
  Eigen::VectorXd g;
  double f = nll_and_gradient(model, data, &g);
  if (!std::isfinite(f)) throw TrainingError("non-finite CRF loss at initialization");
  out.loss.push_back(f);

  std::deque<Eigen::VectorXd> s_hist;
  std::deque<Eigen::VectorXd> y_hist;
  constexpr double kArmijo = 1e-4;
  for (size_t iter = 0; iter < config.max_iters; ++iter) {
    if (g.norm() < config.tolerance) {
      out.converged = true;
      break;
    }
    // Two-loop recursion for the L-BFGS direction.
    Eigen::VectorXd q = g;
    std::vector<double> alphas(s_hist.size());
    for (size_t i = s_hist.size(); i-- > 0;) {
      const double rho = 1.0 / y_hist[i].dot(s_hist[i]);
      alphas[i] = rho * s_hist[i].dot(q);
      q -= alphas[i] * y_hist[i];
    }
    if (!s_hist.empty()) {
      q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    }
    for (size_t i = 0; i < s_hist.size(); ++i) {
      const double rho = 1.0 / y_hist[i].dot(s_hist[i]);
      const double beta = rho * y_hist[i].dot(q);
      q += (alphas[i] - beta) * s_hist[i];
    }
    Eigen::VectorXd d = -q;
    double slope = g.dot(d);
    if (!(slope < 0)) {
      d = -g;
      slope = -g.squaredNorm();
      s_hist.clear();
      y_hist.clear();
    }
    double step = s_hist.empty() ? std::min(1.0, 1.0 / g.norm()) : 1.0;
    bool accepted = false;
    Eigen::VectorXd w_new;
    Eigen::VectorXd g_new;
    double f_new = 0;
    for (int tries = 0; tries < 60; ++tries) {
      w_new = w + step * d;
      model.set_parameters(w_new);
      f_new = nll_and_gradient(model, data, &g_new);
      if (std::isfinite(f_new) && f_new <= f + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      model.set_parameters(w);
      break;
    }
    Eigen::VectorXd s = w_new - w;
    Eigen::VectorXd y = g_new - g;
    if (s.dot(y) > 1e-12) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      if (s_hist.size() > config.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
      }
    }
    w = std::move(w_new);
    g = std::move(g_new);
    f = f_new;
    out.loss.push_back(f);
    ++out.iterations;
  }
  model.set_parameters(w);
  out.final_gradient_norm = g.norm();
  if (out.final_gradient_norm < config.tolerance) out.converged = true;
  return model;
}

std::string format_crf(const CrfModel& model) {
  std::string out = std::string(kCrfMagic) + " " + std::to_string(kCrfVersion) + "\n";
  out += "labels " + std::to_string(model.num_labels()) + "\n";
  for (const auto& name : model.labels().names()) out += name + "\n";
  out += "l2_sigma " + format_double(model.l2_sigma()) + "\n";
  std::string weights;
  size_t count = 0;
  const auto names = model.labels().names();
  for (size_t f = 0; f < model.num_features(); ++f) {
    for (size_t y = 0; y < model.num_labels(); ++y) {
      const double w = model.unary()(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(y));
      if (w == 0) continue;
      weights += model.features()[f] + "\t" + names[y] + "\t" + format_double(w) + "\n";
      ++count;
    }
  }
  out += "weights " + std::to_string(count) + "\n" + weights;
  out += "transitions\n";
  for (Eigen::Index a = 0; a < model.transitions().rows(); ++a) {
    for (Eigen::Index b = 0; b < model.transitions().cols(); ++b) {
      if (b > 0) out += ' ';
      out += format_double(model.transitions()(a, b));
    }
    out += '\n';
  }
  return out;
}

CrfModel parse_crf(std::string_view content) {
  auto lines = internal::split_lines(content);
  size_t pos = 0;
  auto next = [&]() -> std::string_view {
    if (pos >= lines.size()) throw ValidationError("CRF model file truncated");
    return lines[pos++];
  };
  auto expect_field = [&](std::string_view key) {
    auto line = next();
    auto parts = internal::split(line, ' ');
    if (parts.size() != 2 || parts[0] != key) {
      throw ValidationError("CRF model: expected '" + std::string(key) + " <value>', got '" +
                            std::string(line) + "'");
    }
    return parts[1];
  };
  if (parse_int(expect_field(kCrfMagic)) != kCrfVersion) {
    throw ValidationError("unsupported CRF model version");
  }
  const auto num_labels = static_cast<size_t>(parse_int(expect_field("labels")));
  std::vector<BioLabel> labels;
  for (size_t i = 0; i < num_labels; ++i) labels.push_back(parse_label(next()));
  const double sigma = parse_double(expect_field("l2_sigma"));
  const auto num_weights = static_cast<size_t>(parse_int(expect_field("weights")));
  LabelSet label_set(labels);
  std::vector<std::string> features;
  std::unordered_map<std::string, size_t> index;
  struct Entry {
    size_t feature;
    size_t label;
    double weight;
  };
  std::vector<Entry> entries;
  for (size_t i = 0; i < num_weights; ++i) {
    auto parts = internal::split(next(), '\t');
    if (parts.size() != 3) throw ValidationError("CRF model: malformed weight line");
    auto [it, inserted] = index.emplace(std::string(parts[0]), features.size());
    if (inserted) features.emplace_back(parts[0]);
    entries.push_back({it->second, label_set.index_of(parse_label(parts[1])), parse_double(parts[2])});
  }
  CrfModel model(label_set, std::move(features), sigma);
  for (const auto& e : entries) {
    model.unary()(static_cast<Eigen::Index>(e.feature), static_cast<Eigen::Index>(e.label)) = e.weight;
  }
  if (next() != "transitions") throw ValidationError("CRF model: missing transitions block");
  for (size_t a = 0; a < num_labels; ++a) {
    auto parts = internal::split(next(), ' ');
    if (parts.size() != num_labels) throw ValidationError("CRF model: malformed transition row");
    for (size_t b = 0; b < num_labels; ++b) {
      model.transitions()(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = parse_double(parts[b]);
    }
  }
  return model;
}

void save_crf(const CrfModel& model, const std::filesystem::path& path) {
  internal::write_file(path, format_crf(model));
}

CrfModel load_crf(const std::filesystem::path& path) {
  return parse_crf(internal::read_file(path));
}

}  // namespace adrtag
