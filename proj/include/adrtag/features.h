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

#ifndef ADRTAG_FEATURES_H_
#define ADRTAG_FEATURES_H_

#include <string>
#include <vector>

#include "adrtag/corpus.h"
#include "adrtag/embeddings.h"
#include "adrtag/lexicon.h"
#include "adrtag/tokenization.h"

namespace adrtag {

// Binary features present at one token, sorted and unique.
struct FeatureVector {
  std::vector<std::string> keys;

  bool has(std::string_view key) const;
};

struct FeatureConfig {
  size_t window = 5;
  bool use_pos = true;
  bool use_semtype = true;
  bool use_lexicons = true;
  bool use_clusters = true;
  // Emit ADR_IN_CONTEXT=1 when an ADR token lies within the window.
  bool adr_context_feature = false;
};

// Borrowed resources; any pointer may be null to disable its family.
struct FeatureResources {
  const Lemmatizer* lemmatizer = nullptr;
  const TokenAnnotator* pos = nullptr;
  const TokenAnnotator* semtype = nullptr;
  std::vector<const Lexicon*> lexicons;
  const ClusterModel* clusters = nullptr;
};

// Per-token keys for every offset o in [-window, +window] that stays inside
// the sequence: "<o>:LEMMA=..", "<o>:POS=..", "<o>:SEM=..",
// "<o>:LEX:<name>=1" and "<o>:CLUST=..", plus "BIAS" and, when configured,
// "ADR_IN_CONTEXT=1". `adr_spans` are unit-local ADR mention spans and are
// required when the ADR context feature is on.
std::vector<FeatureVector> extract_features(const std::vector<Token>& tokens,
                                            const FeatureConfig& config,
                                            const FeatureResources& resources,
                                            const std::vector<Span>* adr_spans = nullptr);

// Lowercased lemma of a token surface.
std::string token_lemma(const Token& token, const Lemmatizer* lemmatizer);

}  // namespace adrtag

#endif  // ADRTAG_FEATURES_H_
