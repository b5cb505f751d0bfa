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

#ifndef ADRTAG_TESTS_BIO_ORACLE_H_
#define ADRTAG_TESTS_BIO_ORACLE_H_

#include "adrtag/random.h"
#include "adrtag/tokenization.h"
#include "adrtag/utf8.h"

namespace adrtag::testing {

struct BioCase {
  TextUnit unit;
  std::vector<Token> tokens;
  std::vector<MentionAnnotation> mentions;  // token-aligned, document offsets
};

// Random words separated by one or two spaces, with non-overlapping mentions
// covering whole token runs. Adjacent runs of the same class are allowed.
inline BioCase random_bio_case(Rng& rng) {
  static const char* kWords[] = {"rash", "severe", "no", "rats", "(grade", "3)", "NSAIDs",
                                 "fever,", "liver", "failure.", "élevée", "x"};
  BioCase c;
  std::string text;
  const size_t n_words = 1 + rng.below(15);
  for (size_t i = 0; i < n_words; ++i) {
    if (i > 0) text += rng.below(3) == 0 ? "  " : " ";
    text += kWords[rng.below(std::size(kWords))];
  }
  c.unit.text = to_u32(text);
  c.unit.doc_offset = rng.below(1000);
  c.tokens = tokenize(c.unit.text);
  size_t t = 0;
  while (t < c.tokens.size()) {
    if (rng.below(3) != 0) {
      ++t;
      continue;
    }
    const size_t len = 1 + rng.below(std::min<size_t>(4, c.tokens.size() - t));
    const EntityClass cls = kAllEntityClasses[rng.below(kNumEntityClasses)];
    const Span local{c.tokens[t].span.start, c.tokens[t + len - 1].span.end};
    MentionAnnotation m;
    m.cls = cls;
    m.spans = {c.unit.to_document(local)};
    m.surface = to_utf8(std::u32string_view(c.unit.text).substr(local.start, local.length()));
    c.mentions.push_back(m);
    t += len;
  }
  return c;
}

inline bool same_mentions(const std::vector<MentionAnnotation>& a,
                          const std::vector<MentionAnnotation>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].cls != b[i].cls || a[i].spans != b[i].spans || a[i].surface != b[i].surface) {
      return false;
    }
  }
  return true;
}

// Encodes in unit-local coordinates with all classes, then decodes.
inline std::vector<MentionAnnotation> bio_round_trip(const BioCase& c) {
  const auto local = project_to_unit(c.unit, c.mentions);
  std::vector<EntityClass> classes(kAllEntityClasses.begin(), kAllEntityClasses.end());
  TaggedSequence seq{c.unit, c.tokens, align_joint(c.tokens, local, classes)};
  return decode_mentions(seq);
}

}  // namespace adrtag::testing

#endif  // ADRTAG_TESTS_BIO_ORACLE_H_
