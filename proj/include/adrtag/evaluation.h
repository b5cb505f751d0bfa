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

#ifndef ADRTAG_EVALUATION_H_
#define ADRTAG_EVALUATION_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adrtag/corpus.h"
#include "adrtag/tokenization.h"

namespace adrtag {

// Document counts for a holdout split. When `exact` is false the counts are
// proportions and are scaled to the corpus size by largest remainder.
struct SplitSpec {
  size_t train = 56;
  size_t validation = 24;
  size_t test = 21;
  uint64_t seed = 1;
  bool exact = false;
};

struct CorpusSplit {
  std::vector<AnnotatedDocument> train;
  std::vector<AnnotatedDocument> validation;
  std::vector<AnnotatedDocument> test;
};

// Partition sizes for n documents. Throws ConfigError when n < 3 or when an
// exact spec does not add up to n.
std::array<size_t, 3> split_sizes(size_t n, const SplitSpec& spec);
CorpusSplit split_corpus(const std::vector<AnnotatedDocument>& docs, const SplitSpec& spec);

struct Prf {
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;

  // Percentages; 0 when the denominator is 0.
  double precision() const;
  double recall() const;
  double f1() const;

  Prf& operator+=(const Prf& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const Prf&, const Prf&) = default;
};

// Harmonic mean of two percentages, 0 when both are 0.
double f1_score(double precision, double recall);

struct PrfScores {
  std::array<std::optional<Prf>, kNumEntityClasses> per_class{};
  Prf micro;

  const std::optional<Prf>& operator[](EntityClass c) const { return per_class[class_index(c)]; }
};

enum class MatchMode { kWithType, kWithoutType };
MatchMode parse_match_mode(std::string_view name);  // "with-type" | "without-type"
std::string_view match_mode_name(MatchMode mode);

// Token counts for one class; B and I count alike. Sequences must align
// token for token.
Prf token_prf(const std::vector<TaggedSequence>& gold, const std::vector<TaggedSequence>& pred,
              EntityClass cls);
PrfScores token_scores(const std::vector<TaggedSequence>& gold,
                       const std::vector<TaggedSequence>& pred,
                       const std::vector<EntityClass>& classes);

// Exact-span matching, greedy in document order. `gold[d]` and `pred[d]`
// hold the mentions of document d. WithoutType fills only the micro row.
PrfScores mention_prf(const std::vector<std::vector<MentionAnnotation>>& gold,
                      const std::vector<std::vector<MentionAnnotation>>& pred, MatchMode mode);

// Pairs documents by id. Gold documents missing from `pred` count as
// unpredicted; predicted documents without gold raise ValidationError.
PrfScores evaluate_documents(const std::vector<AnnotatedDocument>& gold,
                             const std::vector<AnnotatedDocument>& pred, MatchMode mode);

// Aligned plain-text table, 2 decimals.
std::string format_scores(const PrfScores& scores, std::string_view title);
// One line per row: "<class> tp fp fn P R F1".
std::string format_summary(const PrfScores& scores);

}  // namespace adrtag

#endif  // ADRTAG_EVALUATION_H_
