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

#include "adrtag/evaluation.h"

#include <algorithm>
#include <map>
#include <numeric>

#include "adrtag/errors.h"
#include "adrtag/numeric_io.h"
#include "adrtag/random.h"

namespace adrtag {
namespace {

double percent(size_t num, size_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

bool is_class(const BioLabel& l, EntityClass c) { return !l.is_outside() && l.cls == c; }

std::string pad_right(std::string s, size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string pad_left(std::string s, size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

}  // namespace

double Prf::precision() const { return percent(tp, tp + fp); }
double Prf::recall() const { return percent(tp, tp + fn); }
double Prf::f1() const { return f1_score(precision(), recall()); }

double f1_score(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

std::array<size_t, 3> split_sizes(size_t n, const SplitSpec& spec) {
  if (n < 3) throw ConfigError("corpus split needs at least 3 documents, got " + std::to_string(n));
  const std::array<size_t, 3> parts{spec.train, spec.validation, spec.test};
  const size_t total = parts[0] + parts[1] + parts[2];
  if (spec.exact) {
    if (total != n) {
      throw ConfigError("split sizes sum to " + std::to_string(total) + " but corpus has " +
                        std::to_string(n) + " documents");
    }
    return parts;
  }
  if (total == 0) throw ConfigError("split proportions are all zero");
  std::array<size_t, 3> sizes{};
  std::array<size_t, 3> rem{};
  size_t assigned = 0;
  for (size_t i = 0; i < 3; ++i) {
    sizes[i] = parts[i] * n / total;
    rem[i] = parts[i] * n % total;
    assigned += sizes[i];
  }
  std::array<size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return rem[a] > rem[b]; });
  for (size_t k = 0; assigned < n; ++k, ++assigned) ++sizes[order[k % 3]];
  return sizes;
}

CorpusSplit split_corpus(const std::vector<AnnotatedDocument>& docs, const SplitSpec& spec) {
  const auto sizes = split_sizes(docs.size(), spec);
  std::vector<size_t> order(docs.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(spec.seed);
  rng.shuffle(order);
  CorpusSplit out;
  size_t k = 0;
  for (size_t i = 0; i < sizes[0]; ++i) out.train.push_back(docs[order[k++]]);
  for (size_t i = 0; i < sizes[1]; ++i) out.validation.push_back(docs[order[k++]]);
  for (size_t i = 0; i < sizes[2]; ++i) out.test.push_back(docs[order[k++]]);
  return out;
}

MatchMode parse_match_mode(std::string_view name) {
  if (name == "with-type") return MatchMode::kWithType;
  if (name == "without-type") return MatchMode::kWithoutType;
  throw ConfigError("unknown match mode '" + std::string(name) + "'");
}

std::string_view match_mode_name(MatchMode mode) {
  return mode == MatchMode::kWithType ? "with-type" : "without-type";
}

Prf token_prf(const std::vector<TaggedSequence>& gold, const std::vector<TaggedSequence>& pred,
              EntityClass cls) {
  if (gold.size() != pred.size()) {
    throw ValidationError("gold and predicted sequence counts differ");
  }
  Prf out;
  for (size_t s = 0; s < gold.size(); ++s) {
    const auto& g = gold[s].labels;
    const auto& p = pred[s].labels;
    if (g.size() != p.size()) {
      throw ValidationError("sequence " + std::to_string(s) + ": gold has " +
                            std::to_string(g.size()) + " labels, prediction " +
                            std::to_string(p.size()));
    }
    for (size_t t = 0; t < g.size(); ++t) {
      const bool in_g = is_class(g[t], cls);
      const bool in_p = is_class(p[t], cls);
      if (in_g && in_p) ++out.tp;
      else if (in_p) ++out.fp;
      else if (in_g) ++out.fn;
    }
  }
  return out;
}

PrfScores token_scores(const std::vector<TaggedSequence>& gold,
                       const std::vector<TaggedSequence>& pred,
                       const std::vector<EntityClass>& classes) {
  PrfScores out;
  for (EntityClass c : classes) {
    Prf p = token_prf(gold, pred, c);
    out.per_class[class_index(c)] = p;
    out.micro += p;
  }
  return out;
}

PrfScores mention_prf(const std::vector<std::vector<MentionAnnotation>>& gold,
                      const std::vector<std::vector<MentionAnnotation>>& pred, MatchMode mode) {
  if (gold.size() != pred.size()) {
    throw ValidationError("gold and predicted document counts differ");
  }
  const bool typed = mode == MatchMode::kWithType;
  std::array<Prf, kNumEntityClasses> per{};
  auto by_position = [](const MentionAnnotation& a, const MentionAnnotation& b) {
    if (a.spans != b.spans) return a.spans < b.spans;
    return class_index(a.cls) < class_index(b.cls);
  };
  for (size_t d = 0; d < gold.size(); ++d) {
    auto g = gold[d];
    auto p = pred[d];
    std::stable_sort(g.begin(), g.end(), by_position);
    std::stable_sort(p.begin(), p.end(), by_position);
    std::vector<bool> used(g.size(), false);
    for (const auto& m : p) {
      bool hit = false;
      for (size_t j = 0; j < g.size(); ++j) {
        if (used[j] || g[j].spans != m.spans) continue;
        if (typed && g[j].cls != m.cls) continue;
        used[j] = true;
        hit = true;
        break;
      }
      if (hit) ++per[class_index(m.cls)].tp;
      else ++per[class_index(m.cls)].fp;
    }
    for (size_t j = 0; j < g.size(); ++j) {
      if (!used[j]) ++per[class_index(g[j].cls)].fn;
    }
  }
  PrfScores out;
  for (size_t c = 0; c < kNumEntityClasses; ++c) {
    out.micro += per[c];
    if (typed) out.per_class[c] = per[c];
  }
  return out;
}

PrfScores evaluate_documents(const std::vector<AnnotatedDocument>& gold,
                             const std::vector<AnnotatedDocument>& pred, MatchMode mode) {
  std::map<std::string, const AnnotatedDocument*> predicted;
  for (const auto& d : pred) predicted[d.doc_id] = &d;
  std::vector<std::vector<MentionAnnotation>> g, p;
  for (const auto& d : gold) {
    g.push_back(d.annotations);
    auto it = predicted.find(d.doc_id);
    if (it == predicted.end()) {
      p.emplace_back();
    } else {
      p.push_back(it->second->annotations);
      predicted.erase(it);
    }
  }
  if (!predicted.empty()) {
    throw ValidationError("prediction for document '" + predicted.begin()->first +
                          "' has no gold counterpart");
  }
  return mention_prf(g, p, mode);
}

std::string format_scores(const PrfScores& scores, std::string_view title) {
  struct Line {
    std::string name;
    Prf prf;
  };
  std::vector<Line> lines;
  for (EntityClass c : kAllEntityClasses) {
    if (scores[c]) lines.push_back({std::string(class_display_name(c)), *scores[c]});
  }
  lines.push_back({"Micro-average", scores.micro});
  size_t w = std::string_view("Entity class").size();
  for (const auto& l : lines) w = std::max(w, l.name.size());
  std::string out;
  if (!title.empty()) out += std::string(title) + "\n";
  out += pad_right("Entity class", w) + "  " + pad_left("TP", 6) + pad_left("FP", 6) +
         pad_left("FN", 6) + pad_left("P", 9) + pad_left("R", 9) + pad_left("F1", 9) + "\n";
  for (const auto& l : lines) {
    out += pad_right(l.name, w) + "  " + pad_left(std::to_string(l.prf.tp), 6) +
           pad_left(std::to_string(l.prf.fp), 6) + pad_left(std::to_string(l.prf.fn), 6) +
           pad_left(format_fixed(l.prf.precision(), 2), 9) +
           pad_left(format_fixed(l.prf.recall(), 2), 9) +
           pad_left(format_fixed(l.prf.f1(), 2), 9) + "\n";
  }
  return out;
}

std::string format_summary(const PrfScores& scores) {
  std::string out;
  auto row = [&](std::string_view name, const Prf& p) {
    out += std::string(name) + " " + std::to_string(p.tp) + " " + std::to_string(p.fp) + " " +
           std::to_string(p.fn) + " " + format_fixed(p.precision(), 2) + " " +
           format_fixed(p.recall(), 2) + " " + format_fixed(p.f1(), 2) + "\n";
  };
  for (EntityClass c : kAllEntityClasses) {
    if (scores[c]) row(class_name(c), *scores[c]);
  }
  row("micro", scores.micro);
  return out;
}

}  // namespace adrtag
