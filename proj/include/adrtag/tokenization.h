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

#ifndef ADRTAG_TOKENIZATION_H_
#define ADRTAG_TOKENIZATION_H_

#include <string>
#include <vector>

#include "adrtag/corpus.h"
#include "adrtag/structure.h"

namespace adrtag {

struct Token {
  std::string surface;  // UTF-8
  Span span;            // unit-local
  size_t index = 0;
};

// Whitespace split, then leading and trailing characters from
// `.,;:()[]{}%"'*†` are detached as single-character tokens.
std::vector<Token> tokenize(std::u32string_view text);
std::vector<Span> token_spans(std::u32string_view text);
bool is_detachable_punct(char32_t c);

enum class Tag { kO, kB, kI };

struct BioLabel {
  Tag tag = Tag::kO;
  EntityClass cls = EntityClass::kAdverseReaction;  // ignored when tag is O

  static BioLabel outside() { return {}; }
  static BioLabel begin(EntityClass c) { return {Tag::kB, c}; }
  static BioLabel inside(EntityClass c) { return {Tag::kI, c}; }

  bool is_outside() const { return tag == Tag::kO; }
  friend bool operator==(const BioLabel& a, const BioLabel& b) {
    if (a.tag != b.tag) return false;
    return a.tag == Tag::kO || a.cls == b.cls;
  }
};

// "O", "B-Severity", "I-AdverseReaction".
std::string label_name(const BioLabel& label);
BioLabel parse_label(std::string_view name);

// Ordered label inventory shared by a model and its training data. Index 0 is
// always O.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::vector<BioLabel> labels);

  // O, B-c, I-c.
  static LabelSet for_class(EntityClass c);
  // O followed by B/I for each class in order; all six classes give 13 labels.
  static LabelSet joint(const std::vector<EntityClass>& classes);
  static LabelSet joint_all();

  size_t size() const { return labels_.size(); }
  const BioLabel& operator[](size_t i) const { return labels_[i]; }
  const std::vector<BioLabel>& labels() const { return labels_; }
  std::vector<std::string> names() const;
  // Throws ValidationError when the label is not in the set.
  size_t index_of(const BioLabel& label) const;
  bool contains(const BioLabel& label) const;
  bool contains_class(EntityClass c) const;
  // Classes covered by the set, in inventory order.
  std::vector<EntityClass> classes() const;

  friend bool operator==(const LabelSet& a, const LabelSet& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<BioLabel> labels_;
};

struct TaggedSequence {
  TextUnit unit;
  std::vector<Token> tokens;
  std::vector<BioLabel> labels;
};

// Mentions must be single-span and already in unit-local offsets. Only
// mentions of `cls` are encoded. A token belongs to a mention when its span
// midpoint lies inside the mention. Overlapping same-class mentions raise
// ValidationError naming both ids.
std::vector<BioLabel> align_annotations(const std::vector<Token>& tokens,
                                        const std::vector<MentionAnnotation>& mentions,
                                        EntityClass cls);

// Joint encoding over several classes. When two classes claim a token the
// earlier class in `classes` keeps it.
std::vector<BioLabel> align_joint(const std::vector<Token>& tokens,
                                  const std::vector<MentionAnnotation>& mentions,
                                  const std::vector<EntityClass>& classes);

// Merges label runs into mentions with document offsets. An I that does not
// continue a run of its class starts a new mention. Ids are left empty.
std::vector<MentionAnnotation> decode_mentions(const TaggedSequence& seq);

// Projects document-level mentions overlapping `unit` into local offsets.
std::vector<MentionAnnotation> project_to_unit(const TextUnit& unit,
                                               const std::vector<MentionAnnotation>& mentions);

}  // namespace adrtag

#endif  // ADRTAG_TOKENIZATION_H_
