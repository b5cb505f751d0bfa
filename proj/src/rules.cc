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

#include "adrtag/rules.h"

#include <algorithm>

#include "adrtag/resources.h"
#include "adrtag/utf8.h"

namespace adrtag {
namespace {

MentionAnnotation token_mention(const TextUnit& unit, const std::vector<Token>& tokens,
                                size_t begin, size_t end, EntityClass cls) {
  Span local{tokens[begin].span.start, tokens[end - 1].span.end};
  MentionAnnotation m;
  m.cls = cls;
  m.spans = {unit.to_document(local)};
  m.surface = to_utf8(std::u32string_view(unit.text).substr(local.start, local.length()));
  return m;
}

bool ends_scope(const std::string& surface) {
  const std::string lower = to_lower(surface);
  return lower == "." || lower == ";" || lower == ":" || lower == "but" || lower == "however";
}

}  // namespace

NegationResource NegationResource::bundled() {
  return {bundled_negation_triggers(), bundled_negation_ignore()};
}

AnimalResource AnimalResource::bundled() { return {bundled_species()}; }

PhraseMatch HeuristicNegationScope::scope(const std::vector<Token>& tokens,
                                          const PhraseMatch& trigger) const {
  const size_t limit = std::min(tokens.size(), std::max(trigger.end, trigger.begin + max_tokens_));
  size_t end = trigger.end;
  while (end < limit && !ends_scope(tokens[end].surface)) ++end;
  return {trigger.begin, end};
}

std::vector<MentionAnnotation> tag_negations(const TextUnit& unit, const std::vector<Token>& tokens,
                                             const std::vector<MentionAnnotation>& adr_mentions,
                                             const NegationResource& resource,
                                             const NegationScope* scope) {
  std::vector<MentionAnnotation> out;
  if (adr_mentions.empty() || tokens.empty()) return out;
  const HeuristicNegationScope default_scope;
  if (!scope) scope = &default_scope;
  const auto ignored = find_matches(resource.ignore_phrases, tokens);
  for (const auto& trigger : find_matches(resource.triggers, tokens)) {
    const PhraseMatch region = scope->scope(tokens, trigger);
    const bool cancelled = std::any_of(ignored.begin(), ignored.end(), [&](const PhraseMatch& m) {
      return m.begin < region.end && region.begin < m.end;
    });
    if (cancelled) continue;
    bool adr_in_scope = false;
    for (size_t t = trigger.end; t < region.end && !adr_in_scope; ++t) {
      for (const auto& adr : adr_mentions) {
        if (adr.cls == EntityClass::kAdverseReaction && !adr.spans.empty() &&
            adr.extent().overlaps(tokens[t].span)) {
          adr_in_scope = true;
          break;
        }
      }
    }
    if (!adr_in_scope) continue;
    out.push_back(token_mention(unit, tokens, trigger.begin, trigger.end, EntityClass::kNegation));
  }
  return out;
}

std::vector<MentionAnnotation> tag_animals(const TextUnit& unit, const std::vector<Token>& tokens,
                                           const AnimalResource& resource) {
  std::vector<MentionAnnotation> out;
  for (size_t t = 0; t < tokens.size(); ++t) {
    if (resource.species.contains(to_lower(tokens[t].surface))) {
      out.push_back(token_mention(unit, tokens, t, t + 1, EntityClass::kAnimal));
    }
  }
  return out;
}

}  // namespace adrtag
