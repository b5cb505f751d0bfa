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

#include "adrtag/blstm.h"

#include <bit>
#include <cmath>
#include <cstring>

#include "adrtag/errors.h"
#include "adrtag/random.h"
#include "adrtag/utf8.h"
#include "file_util.h"

namespace adrtag {
namespace {

static_assert(std::endian::native == std::endian::little,
              "model serialization assumes a little-endian host");

constexpr char kMagic[8] = {'A', 'D', 'R', 'B', 'L', 'S', 'T', 'M'};
constexpr uint32_t kVersion = 1;

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Activations of one direction, indexed by time step in reading order.
struct DirectionTrace {
  MatrixXd i, f, o, g, c, h;  // T x H each
  MatrixXd tanh_c;
};

// Runs one direction over `inputs`; reverse reads from the last token.
DirectionTrace run_direction(const LstmDirectionParams& p, const MatrixXd& inputs, size_t hidden,
                             bool reverse) {
  const Index T = inputs.rows();
  const auto H = static_cast<Index>(hidden);
  DirectionTrace tr;
  for (MatrixXd* m : {&tr.i, &tr.f, &tr.o, &tr.g, &tr.c, &tr.h, &tr.tanh_c}) m->resize(T, H);
  VectorXd h_prev = VectorXd::Zero(H);
  VectorXd c_prev = VectorXd::Zero(H);
  VectorXd z(4 * H);
  for (Index step = 0; step < T; ++step) {
    const Index t = reverse ? T - 1 - step : step;
    z.noalias() = p.W * inputs.row(t).transpose();
    z.noalias() += p.U * h_prev;
    z += p.b;
    for (Index k = 0; k < H; ++k) {
      const double ig = sigmoid(z(k));
      const double fg = sigmoid(z(H + k));
      const double og = sigmoid(z(2 * H + k));
      const double gg = std::tanh(z(3 * H + k));
      const double cc = fg * c_prev(k) + ig * gg;
      const double tc = std::tanh(cc);
      tr.i(t, k) = ig;
      tr.f(t, k) = fg;
      tr.o(t, k) = og;
      tr.g(t, k) = gg;
      tr.c(t, k) = cc;
      tr.tanh_c(t, k) = tc;
      tr.h(t, k) = og * tc;
    }
    h_prev = tr.h.row(t).transpose();
    c_prev = tr.c.row(t).transpose();
  }
  return tr;
}

// Accumulates parameter gradients of one direction given dL/dh_t from the
// output layer.
void backprop_direction(const LstmDirectionParams& p, const MatrixXd& inputs,
                        const DirectionTrace& tr, const MatrixXd& dh_out, bool reverse,
                        LstmDirectionParams& grad) {
  const Index T = inputs.rows();
  const Index H = tr.h.cols();
  VectorXd dh_next = VectorXd::Zero(H);
  VectorXd dc_next = VectorXd::Zero(H);
  VectorXd dz(4 * H);
  for (Index step = T - 1; step >= 0; --step) {
    const Index t = reverse ? T - 1 - step : step;
    const Index prev = reverse ? t + 1 : t - 1;
    const bool has_prev = step > 0;
    for (Index k = 0; k < H; ++k) {
      const double dh = dh_out(t, k) + dh_next(k);
      const double og = tr.o(t, k);
      const double tc = tr.tanh_c(t, k);
      const double dc = dh * og * (1.0 - tc * tc) + dc_next(k);
      const double c_prev = has_prev ? tr.c(prev, k) : 0.0;
      const double ig = tr.i(t, k);
      const double fg = tr.f(t, k);
      const double gg = tr.g(t, k);
      dz(k) = dc * gg * ig * (1.0 - ig);
      dz(H + k) = dc * c_prev * fg * (1.0 - fg);
      dz(2 * H + k) = dh * tc * og * (1.0 - og);
      dz(3 * H + k) = dc * ig * (1.0 - gg * gg);
      dc_next(k) = dc * fg;
    }
    grad.W.noalias() += dz * inputs.row(t);
    grad.b += dz;
    if (has_prev) {
      grad.U.noalias() += dz * tr.h.row(prev);
      dh_next.noalias() = p.U.transpose() * dz;
    } else {
      dh_next.setZero();
    }
  }
}

MatrixXd softmax_rows(const MatrixXd& logits) {
  MatrixXd out(logits.rows(), logits.cols());
  for (Index t = 0; t < logits.rows(); ++t) {
    const double m = logits.row(t).maxCoeff();
    out.row(t) = (logits.row(t).array() - m).exp();
    out.row(t) /= out.row(t).sum();
  }
  return out;
}

MatrixXd hidden_concat(const DirectionTrace& fw, const DirectionTrace& bw,
                       const DropoutMasks* mask) {
  const Index T = fw.h.rows();
  const Index H = fw.h.cols();
  MatrixXd hc(T, 2 * H);
  if (mask) {
    hc.leftCols(H) = fw.h.cwiseProduct(mask->forward);
    hc.rightCols(H) = bw.h.cwiseProduct(mask->backward);
  } else {
    hc.leftCols(H) = fw.h;
    hc.rightCols(H) = bw.h;
  }
  return hc;
}

void init_uniform(MatrixXd& m, double r, Rng& rng) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(-r, r);
  }
}

LstmDirectionParams init_direction(size_t d, size_t h, Rng& rng) {
  const auto D = static_cast<Index>(d);
  const auto H = static_cast<Index>(h);
  LstmDirectionParams p;
  p.W.resize(4 * H, D);
  p.U.resize(4 * H, H);
  init_uniform(p.W, std::sqrt(6.0 / static_cast<double>(d + h)), rng);
  init_uniform(p.U, std::sqrt(6.0 / static_cast<double>(h + h)), rng);
  p.b = VectorXd::Zero(4 * H);
  p.b.segment(H, H).setConstant(1.0);
  return p;
}

DropoutMasks sample_masks(Index T, Index H, double rate, Rng& rng) {
  DropoutMasks m{MatrixXd(T, H), MatrixXd(T, H)};
  const double keep = 1.0 - rate;
  for (MatrixXd* mm : {&m.forward, &m.backward}) {
    for (Index t = 0; t < T; ++t) {
      for (Index k = 0; k < H; ++k) (*mm)(t, k) = rng.uniform() < keep ? 1.0 / keep : 0.0;
    }
  }
  return m;
}

template <typename T>
void put(std::string& out, const T& value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}
  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw ValidationError("BLSTM model file truncated");
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::string_view take(size_t n) {
    if (pos_ + n > bytes_.size()) throw ValidationError("BLSTM model file truncated");
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  size_t pos_ = 0;
};

}  // namespace

BlstmParams BlstmParams::zeros_like() const {
  BlstmParams z = *this;
  z.visit([](auto& m) { m.setZero(); });
  return z;
}

size_t BlstmParams::size() const {
  size_t n = 0;
  visit([&n](const auto& m) { n += static_cast<size_t>(m.size()); });
  return n;
}

Eigen::VectorXd BlstmParams::flatten() const {
  VectorXd flat(static_cast<Index>(size()));
  Index k = 0;
  visit([&](const auto& m) {
    for (Index i = 0; i < m.size(); ++i) flat(k++) = m.data()[i];
  });
  return flat;
}

void BlstmParams::unflatten(const Eigen::VectorXd& flat) {
  if (static_cast<size_t>(flat.size()) != size()) throw ConfigError("BLSTM parameter size mismatch");
  Index k = 0;
  visit([&](auto& m) {
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = flat(k++);
  });
}

BlstmModel init_blstm(const LabelSet& labels, size_t input_dim, const BlstmConfig& config) {
  if (input_dim == 0 || config.hidden == 0) throw ConfigError("BLSTM dimensions must be positive");
  if (config.dropout < 0 || config.dropout >= 1) throw ConfigError("dropout must be in [0, 1)");
  Rng rng(config.seed);
  BlstmModel model;
  model.labels = labels;
  model.input_dim = input_dim;
  model.hidden = config.hidden;
  model.dropout_rate = config.dropout;
  model.params.forward = init_direction(input_dim, config.hidden, rng);
  model.params.backward = init_direction(input_dim, config.hidden, rng);
  const auto L = static_cast<Index>(labels.size());
  model.params.V.resize(L, 2 * static_cast<Index>(config.hidden));
  init_uniform(model.params.V, std::sqrt(6.0 / static_cast<double>(2 * config.hidden + labels.size())),
               rng);
  model.params.c = VectorXd::Zero(L);
  return model;
}

void check_embedding_dims(const WordVectors& generic, const WordVectors& target,
                          size_t declared_dim) {
  if (generic.dim() != declared_dim || target.dim() != declared_dim) {
    throw ConfigError("embedding dimension mismatch: declared " + std::to_string(declared_dim) +
                      ", generic " + std::to_string(generic.dim()) + ", target " +
                      std::to_string(target.dim()));
  }
}

Eigen::MatrixXd build_input_vectors(const std::vector<std::string>& words,
                                    const WordVectors& generic, const WordVectors& target) {
  const auto dg = static_cast<Index>(generic.dim());
  const auto dt = static_cast<Index>(target.dim());
  MatrixXd out = MatrixXd::Zero(static_cast<Index>(words.size()), dg + dt);
  for (size_t t = 0; t < words.size(); ++t) {
    const auto row = static_cast<Index>(t);
    auto fill = [&](const WordVectors& model, Index offset) {
      auto idx = model.index_of(words[t]);
      if (!idx) idx = model.index_of(to_lower(words[t]));
      if (idx) {
        out.row(row).segment(offset, static_cast<Index>(model.dim())) =
            model.matrix().row(static_cast<Index>(*idx));
      }
    };
    fill(generic, 0);
    fill(target, dg);
  }
  return out;
}

Eigen::MatrixXd blstm_predict(const BlstmModel& model, const Eigen::MatrixXd& inputs) {
  if (inputs.rows() == 0) throw ValidationError("BLSTM prediction on an empty sequence");
  if (static_cast<size_t>(inputs.cols()) != model.input_dim) {
    throw ConfigError("BLSTM expects " + std::to_string(model.input_dim) + "-dim inputs, got " +
                      std::to_string(inputs.cols()));
  }
  const auto fw = run_direction(model.params.forward, inputs, model.hidden, false);
  const auto bw = run_direction(model.params.backward, inputs, model.hidden, true);
  MatrixXd logits = hidden_concat(fw, bw, nullptr) * model.params.V.transpose();
  logits.rowwise() += model.params.c.transpose();
  return softmax_rows(logits);
}

std::vector<size_t> argmax_rows(const Eigen::MatrixXd& probabilities) {
  std::vector<size_t> out(static_cast<size_t>(probabilities.rows()));
  for (Index t = 0; t < probabilities.rows(); ++t) {
    Index best = 0;
    for (Index y = 1; y < probabilities.cols(); ++y) {
      if (probabilities(t, y) > probabilities(t, best)) best = y;
    }
    out[static_cast<size_t>(t)] = static_cast<size_t>(best);
  }
  return out;
}

double blstm_loss_and_gradient(const BlstmModel& model, const std::vector<BlstmExample>& batch,
                               const std::vector<DropoutMasks>* masks, BlstmParams* gradient) {
  if (masks && masks->size() != batch.size()) throw ConfigError("dropout mask count mismatch");
  const auto H = static_cast<Index>(model.hidden);
  if (gradient) *gradient = model.params.zeros_like();
  double total = 0;
  size_t tokens = 0;
  for (const auto& ex : batch) tokens += ex.gold.size();
  if (tokens == 0) throw ValidationError("BLSTM batch without tokens");
  const double scale = 1.0 / static_cast<double>(tokens);
  for (size_t n = 0; n < batch.size(); ++n) {
    const auto& ex = batch[n];
    if (static_cast<size_t>(ex.inputs.rows()) != ex.gold.size()) {
      throw ValidationError("BLSTM example has mismatched inputs and labels");
    }
    if (ex.gold.empty()) continue;
    const DropoutMasks* mask = masks ? &(*masks)[n] : nullptr;
    const auto fw = run_direction(model.params.forward, ex.inputs, model.hidden, false);
    const auto bw = run_direction(model.params.backward, ex.inputs, model.hidden, true);
    const MatrixXd hc = hidden_concat(fw, bw, mask);
    MatrixXd logits = hc * model.params.V.transpose();
    logits.rowwise() += model.params.c.transpose();
    const MatrixXd probs = softmax_rows(logits);
    for (size_t t = 0; t < ex.gold.size(); ++t) {
      if (ex.gold[t] >= model.num_labels()) throw ValidationError("gold label out of range");
      total -= std::log(std::max(probs(static_cast<Index>(t), static_cast<Index>(ex.gold[t])),
                                 1e-300));
    }
    if (!gradient) continue;
    MatrixXd dlogits = probs;
    for (size_t t = 0; t < ex.gold.size(); ++t) {
      dlogits(static_cast<Index>(t), static_cast<Index>(ex.gold[t])) -= 1.0;
    }
    dlogits *= scale;
    gradient->V.noalias() += dlogits.transpose() * hc;
    gradient->c += dlogits.colwise().sum().transpose();
    MatrixXd dhc = dlogits * model.params.V;  // T x 2H
    MatrixXd dh_fw = dhc.leftCols(H);
    MatrixXd dh_bw = dhc.rightCols(H);
    if (mask) {
      dh_fw = dh_fw.cwiseProduct(mask->forward);
      dh_bw = dh_bw.cwiseProduct(mask->backward);
    }
    backprop_direction(model.params.forward, ex.inputs, fw, dh_fw, false, gradient->forward);
    backprop_direction(model.params.backward, ex.inputs, bw, dh_bw, true, gradient->backward);
  }
  return total * scale;
}

double token_micro_f1(const LabelSet& labels, const std::vector<std::vector<size_t>>& gold,
                      const std::vector<std::vector<size_t>>& predicted) {
  size_t tp = 0, fp = 0, fn = 0;
  for (size_t s = 0; s < gold.size(); ++s) {
    for (size_t t = 0; t < gold[s].size(); ++t) {
      const BioLabel& g = labels[gold[s][t]];
      const BioLabel& p = labels[predicted[s][t]];
      if (!g.is_outside() && !p.is_outside() && g.cls == p.cls) {
        ++tp;
      } else {
        if (!p.is_outside()) ++fp;
        if (!g.is_outside()) ++fn;
      }
    }
  }
  const double precision = tp + fp == 0 ? 0.0 : 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fp);
  const double recall = tp + fn == 0 ? 0.0 : 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fn);
  return precision + recall == 0 ? 0.0 : 2 * precision * recall / (precision + recall);
}

double token_accuracy(const BlstmModel& model, const std::vector<BlstmExample>& data) {
  size_t correct = 0, total = 0;
  for (const auto& ex : data) {
    if (ex.gold.empty()) continue;
    auto pred = argmax_rows(blstm_predict(model, ex.inputs));
    for (size_t t = 0; t < pred.size(); ++t) correct += pred[t] == ex.gold[t];
    total += pred.size();
  }
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

BlstmModel train_blstm(const LabelSet& labels, const std::vector<BlstmExample>& train,
                       const std::vector<BlstmExample>& validation, const BlstmConfig& config,
                       TrainingLog* log) {
  if (train.empty() || validation.empty()) {
    throw ValidationError("BLSTM training needs non-empty training and validation sets");
  }
  if (config.learning_rate <= 0) throw ConfigError("learning_rate must be positive");
  if (config.patience > config.epochs) throw ConfigError("patience must not exceed epochs");
  if (config.batch_size == 0) throw ConfigError("batch_size must be positive");
  const auto dim = static_cast<size_t>(train.front().inputs.cols());
  BlstmModel model = init_blstm(labels, dim, config);
  BlstmModel best = model;
  TrainingLog local;
  TrainingLog& out = log ? *log : local;
  out = {};

  Rng rng(config.seed ^ 0xD1B54A32D192ED03ULL);
  BlstmParams cache = model.params.zeros_like();
  BlstmParams grad;
  std::vector<size_t> order(train.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<std::vector<size_t>> val_gold;
  for (const auto& ex : validation) val_gold.push_back(ex.gold);

  double best_f1 = -1;
  size_t waiting = 0;
  for (size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0;
    size_t batches = 0;
    for (size_t start = 0; start < order.size(); start += config.batch_size) {
      std::vector<BlstmExample> batch;
      std::vector<DropoutMasks> masks;
      for (size_t k = start; k < std::min(order.size(), start + config.batch_size); ++k) {
        const auto& ex = train[order[k]];
        if (ex.gold.empty()) continue;
        batch.push_back(ex);
        masks.push_back(sample_masks(ex.inputs.rows(), static_cast<Index>(model.hidden),
                                     config.dropout, rng));
      }
      if (batch.empty()) continue;
      const double loss = blstm_loss_and_gradient(
          model, batch, config.dropout > 0 ? &masks : nullptr, &grad);
      if (!std::isfinite(loss)) {
        throw TrainingError("non-finite BLSTM loss in epoch " + std::to_string(epoch) +
                            ", batch " + std::to_string(batches + 1));
      }
      loss_sum += loss;
      ++batches;
      // RMSprop, applied block by block.
      std::vector<double*> p_data, g_data, c_data;
      std::vector<Index> sizes;
      model.params.visit([&](auto& m) { p_data.push_back(m.data()); sizes.push_back(m.size()); });
      grad.visit([&](auto& m) { g_data.push_back(m.data()); });
      cache.visit([&](auto& m) { c_data.push_back(m.data()); });
      for (size_t b = 0; b < sizes.size(); ++b) {
        for (Index i = 0; i < sizes[b]; ++i) {
          const double g = g_data[b][i];
          double& c = c_data[b][i];
          c = config.rms_decay * c + (1.0 - config.rms_decay) * g * g;
          p_data[b][i] -= config.learning_rate * g / (std::sqrt(c) + config.rms_epsilon);
        }
      }
    }
    std::vector<std::vector<size_t>> val_pred;
    for (const auto& ex : validation) {
      val_pred.push_back(ex.gold.empty() ? std::vector<size_t>{}
                                         : argmax_rows(blstm_predict(model, ex.inputs)));
    }
    const double f1 = token_micro_f1(labels, val_gold, val_pred);
    out.epochs.push_back({epoch, batches == 0 ? 0.0 : loss_sum / static_cast<double>(batches), f1});
    if (f1 > best_f1) {
      best_f1 = f1;
      best = model;
      out.best_epoch = epoch;
      waiting = 0;
    } else if (++waiting >= config.patience) {
      out.stopped_early = epoch < config.epochs;
      break;
    }
  }
  out.best_validation_f1 = best_f1 < 0 ? 0.0 : best_f1;
  return best;
}

std::string serialize_blstm(const BlstmModel& model) {
  std::string out(kMagic, sizeof(kMagic));
  put(out, kVersion);
  put(out, static_cast<uint32_t>(model.input_dim));
  put(out, static_cast<uint32_t>(model.hidden));
  put(out, static_cast<uint32_t>(model.num_labels()));
  put(out, model.dropout_rate);
  for (const auto& name : model.labels.names()) {
    put(out, static_cast<uint32_t>(name.size()));
    out += name;
  }
  model.params.visit([&](const auto& m) {
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) put(out, static_cast<double>(m(i, j)));
    }
  });
  return out;
}

BlstmModel deserialize_blstm(std::string_view bytes) {
  Reader in(bytes);
  if (in.take(sizeof(kMagic)) != std::string_view(kMagic, sizeof(kMagic))) {
    throw ValidationError("not a BLSTM model file (bad magic)");
  }
  if (in.get<uint32_t>() != kVersion) throw ValidationError("unsupported BLSTM model version");
  const auto d = in.get<uint32_t>();
  const auto h = in.get<uint32_t>();
  const auto l = in.get<uint32_t>();
  const double dropout = in.get<double>();
  std::vector<BioLabel> labels;
  for (uint32_t i = 0; i < l; ++i) labels.push_back(parse_label(in.take(in.get<uint32_t>())));
  BlstmConfig cfg;
  cfg.hidden = h;
  cfg.dropout = dropout;
  BlstmModel model = init_blstm(LabelSet(labels), d, cfg);
  model.params.visit([&](auto& m) {
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) m(i, j) = in.get<double>();
    }
  });
  if (!in.done()) throw ValidationError("trailing bytes in BLSTM model file");
  return model;
}

void save_blstm(const BlstmModel& model, const std::filesystem::path& path) {
  internal::write_file(path, serialize_blstm(model));
}

BlstmModel load_blstm(const std::filesystem::path& path) {
  return deserialize_blstm(internal::read_file(path));
}

}  // namespace adrtag
