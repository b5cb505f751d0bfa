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

#ifndef ADRTAG_RULES_H_
#define ADRTAG_RULES_H_

#include <vector>

#include "adrtag/corpus.h"
#include "adrtag/lexicon.h"
#include "adrtag/structure.h"
#include "adrtag/tokenization.h"

namespace adrtag {

// Dictionary taggers for the Negation and Animal classes. Both are meant to
// run on sub-element units (table cells, list items).

struct NegationResource {
  Lexicon triggers;
  Lexicon ignore_phrases;

  static NegationResource bundled();
};

struct AnimalResource {
  Lexicon species;

  static AnimalResource bundled();
};

// Token range [begin, end) governed by a negation cue.
class NegationScope {
 public:
  virtual ~NegationScope() = default;
  virtual PhraseMatch scope(const std::vector<Token>& tokens, const PhraseMatch& trigger) const = 0;
};

// From the cue to the first of: end of unit, ". ; :", "but"/"however", or
// `max_tokens` tokens counted from the cue.
class HeuristicNegationScope : public NegationScope {
 public:
  explicit HeuristicNegationScope(size_t max_tokens = 10) : max_tokens_(max_tokens) {}
  PhraseMatch scope(const std::vector<Token>& tokens, const PhraseMatch& trigger) const override;

 private:
  size_t max_tokens_;
};

// A cue becomes a Negation mention (over the cue tokens only) when no ignore
// phrase overlaps the cue or its scope and an ADR mention lies inside the
// scope. `adr_mentions` must be in unit-local offsets. Output mentions carry
// document offsets.
std::vector<MentionAnnotation> tag_negations(const TextUnit& unit, const std::vector<Token>& tokens,
                                             const std::vector<MentionAnnotation>& adr_mentions,
                                             const NegationResource& resource,
                                             const NegationScope* scope = nullptr);

// Every token whose lowercased form is a listed species becomes a
// single-token Animal mention.
std::vector<MentionAnnotation> tag_animals(const TextUnit& unit, const std::vector<Token>& tokens,
                                           const AnimalResource& resource);

}  // namespace adrtag

#endif  // ADRTAG_RULES_H_
