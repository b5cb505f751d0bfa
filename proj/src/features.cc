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

#include "adrtag/features.h"

#include <algorithm>

#include "adrtag/errors.h"
#include "adrtag/log.h"
#include "adrtag/utf8.h"

namespace adrtag {
namespace {

// Runs an annotator, degrading to UNK tags if it throws or returns the wrong
// number of tags.
std::vector<std::string> safe_annotate(const TokenAnnotator& annotator,
                                       const std::vector<Token>& tokens) {
  try {
    auto tags = annotator.annotate(tokens);
    if (tags.size() == tokens.size()) return tags;
    log_warning(std::string(annotator.id()) + " annotator returned " +
                std::to_string(tags.size()) + " tags for " + std::to_string(tokens.size()) +
                " tokens; using UNK");
  } catch (const std::exception& e) {
    log_warning(std::string(annotator.id()) + " annotator failed: " + e.what() + "; using UNK");
  }
  return std::vector<std::string>(tokens.size(), "UNK");
}

}  // namespace

bool FeatureVector::has(std::string_view key) const {
  return std::binary_search(keys.begin(), keys.end(), key);
}

std::string token_lemma(const Token& token, const Lemmatizer* lemmatizer) {
  return lemmatizer ? lemmatizer->lemma(token.surface) : to_lower(token.surface);
}

std::vector<FeatureVector> extract_features(const std::vector<Token>& tokens,
                                            const FeatureConfig& config,
                                            const FeatureResources& resources,
                                            const std::vector<Span>* adr_spans) {
  if (config.adr_context_feature && adr_spans == nullptr) {
    throw ConfigError("ADR context feature enabled but no ADR mentions supplied");
  }
  const size_t n = tokens.size();

  // Per-token attributes; each window position reuses them.
  std::vector<std::vector<std::string>> attrs(n);
  for (size_t i = 0; i < n; ++i) {
    const std::string lemma = token_lemma(tokens[i], resources.lemmatizer);
    attrs[i].push_back("LEMMA=" + lemma);
    if (config.use_clusters && resources.clusters) {
      attrs[i].push_back("CLUST=" + cluster_feature(lemma, *resources.clusters, lemma));
    }
  }
  if (config.use_pos && resources.pos) {
    auto tags = safe_annotate(*resources.pos, tokens);
    for (size_t i = 0; i < n; ++i) attrs[i].push_back("POS=" + tags[i]);
  }
  if (config.use_semtype && resources.semtype) {
    auto tags = safe_annotate(*resources.semtype, tokens);
    for (size_t i = 0; i < n; ++i) attrs[i].push_back("SEM=" + tags[i]);
  }
  if (config.use_lexicons) {
    for (const Lexicon* lex : resources.lexicons) {
      if (!lex) continue;
      for (const auto& m : find_matches(*lex, tokens)) {
        for (size_t i = m.begin; i < m.end; ++i) attrs[i].push_back("LEX:" + lex->name() + "=1");
      }
    }
  }

  std::vector<bool> is_adr(n, false);
  if (config.adr_context_feature) {
    for (size_t i = 0; i < n; ++i) {
      for (const Span& s : *adr_spans) {
        if (s.overlaps(tokens[i].span)) {
          is_adr[i] = true;
          break;
        }
      }
    }
  }

  std::vector<FeatureVector> out(n);
  const auto w = static_cast<long>(config.window);
  for (size_t i = 0; i < n; ++i) {
    auto& keys = out[i].keys;
    keys.push_back("BIAS");
    bool adr_near = false;
    for (long o = -w; o <= w; ++o) {
      const long j = static_cast<long>(i) + o;
      if (j < 0 || j >= static_cast<long>(n)) continue;
      const std::string prefix = std::to_string(o) + ":";
      for (const auto& a : attrs[static_cast<size_t>(j)]) keys.push_back(prefix + a);
      if (is_adr[static_cast<size_t>(j)]) adr_near = true;
    }
    if (adr_near) keys.push_back("ADR_IN_CONTEXT=1");
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  }
  return out;
}

}  // namespace adrtag
