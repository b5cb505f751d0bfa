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

#ifndef ADRTAG_SYNTHETIC_H_
#define ADRTAG_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "adrtag/corpus.h"
#include "adrtag/embeddings.h"

namespace adrtag {

// Drug-label-like documents with headings, captioned tables, asterisk lists
// and prose, annotated for all six classes. Roughly one document in four
// carries a discontinuous ADR. Ids are "label_001", "label_002", ...
std::vector<AnnotatedDocument> generate_label_corpus(size_t num_docs, uint64_t seed);

// Sentences drawn from two disjoint vocabularies; each sentence uses one.
struct TopicCorpus {
  std::vector<std::vector<std::string>> sentences;
  std::vector<std::string> topic_a;
  std::vector<std::string> topic_b;
};
TopicCorpus generate_topic_corpus(size_t num_sentences, size_t sentence_length, uint64_t seed);

// Independent uniform [-1, 1) vectors, one per word.
WordVectors random_word_vectors(const std::vector<std::string>& words, size_t dim, uint64_t seed);

}  // namespace adrtag

#endif  // ADRTAG_SYNTHETIC_H_
