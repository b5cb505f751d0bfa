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

#include "adrtag/tokenization.h"

#include <algorithm>

#include "adrtag/errors.h"
#include "adrtag/utf8.h"

namespace adrtag {

bool is_detachable_punct(char32_t c) {
  switch (c) {
    case U'.': case U',': case U';': case U':': case U'(': case U')':
    case U'[': case U']': case U'{': case U'}': case U'%': case U'"':
    case U'\'': case U'*': case U'†':
      return true;
    default:
      return false;
  }
}

std::vector<Span> token_spans(std::u32string_view text) {
  std::vector<Span> spans;
  size_t i = 0;
  while (i < text.size()) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    size_t b = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    size_t e = i;
    std::vector<Span> trailing;
    while (b < e && is_detachable_punct(text[b])) {
      spans.push_back({b, b + 1});
      ++b;
    }
    while (e > b && is_detachable_punct(text[e - 1])) {
      trailing.push_back({e - 1, e});
      --e;
    }
    if (b < e) spans.push_back({b, e});
    spans.insert(spans.end(), trailing.rbegin(), trailing.rend());
  }
  return spans;
}

std::vector<Token> tokenize(std::u32string_view text) {
  std::vector<Token> tokens;
  for (const Span& s : token_spans(text)) {
    tokens.push_back({to_utf8(text.substr(s.start, s.length())), s, tokens.size()});
  }
  return tokens;
}

std::string label_name(const BioLabel& label) {
  switch (label.tag) {
    case Tag::kO:
      return "O";
    case Tag::kB:
      return "B-" + std::string(class_name(label.cls));
    case Tag::kI:
      return "I-" + std::string(class_name(label.cls));
  }
  return "O";
}

BioLabel parse_label(std::string_view name) {
  if (name == "O") return BioLabel::outside();
  if (name.size() > 2 && name[1] == '-') {
    EntityClass c = parse_class(name.substr(2));
    if (name[0] == 'B') return BioLabel::begin(c);
    if (name[0] == 'I') return BioLabel::inside(c);
  }
  throw ValidationError("malformed label '" + std::string(name) + "'");
}

LabelSet::LabelSet(std::vector<BioLabel> labels) : labels_(std::move(labels)) {
  if (labels_.empty() || !labels_.front().is_outside()) {
    throw ConfigError("label set must start with O");
  }
  for (size_t i = 0; i < labels_.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      if (labels_[i] == labels_[j]) {
        throw ConfigError("duplicate label " + label_name(labels_[i]));
      }
    }
  }
}

LabelSet LabelSet::for_class(EntityClass c) { return joint({c}); }

LabelSet LabelSet::joint(const std::vector<EntityClass>& classes) {
  std::vector<BioLabel> labels = {BioLabel::outside()};
  for (EntityClass c : classes) {
    labels.push_back(BioLabel::begin(c));
    labels.push_back(BioLabel::inside(c));
  }
  return LabelSet(std::move(labels));
}

LabelSet LabelSet::joint_all() {
  return joint(std::vector<EntityClass>(kAllEntityClasses.begin(), kAllEntityClasses.end()));
}

std::vector<std::string> LabelSet::names() const {
  std::vector<std::string> out;
  for (const auto& l : labels_) out.push_back(label_name(l));
  return out;
}

size_t LabelSet::index_of(const BioLabel& label) const {
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  throw ValidationError("label " + label_name(label) + " not in label set");
}

bool LabelSet::contains(const BioLabel& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

bool LabelSet::contains_class(EntityClass c) const {
  return contains(BioLabel::begin(c)) || contains(BioLabel::inside(c));
}

std::vector<EntityClass> LabelSet::classes() const {
  std::vector<EntityClass> out;
  for (const auto& l : labels_) {
    if (!l.is_outside() && std::find(out.begin(), out.end(), l.cls) == out.end()) {
      out.push_back(l.cls);
    }
  }
  return out;
}

std::vector<BioLabel> align_annotations(const std::vector<Token>& tokens,
                                        const std::vector<MentionAnnotation>& mentions,
                                        EntityClass cls) {
  std::vector<BioLabel> labels(tokens.size());
  std::vector<const MentionAnnotation*> owner(tokens.size(), nullptr);
  std::vector<const MentionAnnotation*> same;
  for (const auto& m : mentions) {
    if (m.cls == cls) same.push_back(&m);
  }
  for (size_t a = 0; a < same.size(); ++a) {
    for (size_t b = a + 1; b < same.size(); ++b) {
      if (same[a]->extent().overlaps(same[b]->extent())) {
        throw ValidationError("overlapping " + std::string(class_name(cls)) +
                              " mentions " + same[a]->id + " and " + same[b]->id);
      }
    }
  }
  for (const auto* m : same) {
    const Span s = m->extent();
    bool first = true;
    for (size_t t = 0; t < tokens.size(); ++t) {
      const size_t twice_mid = tokens[t].span.start + tokens[t].span.end;
      if (twice_mid >= 2 * s.start && twice_mid < 2 * s.end) {
        labels[t] = first ? BioLabel::begin(cls) : BioLabel::inside(cls);
        owner[t] = m;
        first = false;
      }
    }
  }
  return labels;
}

std::vector<BioLabel> align_joint(const std::vector<Token>& tokens,
                                  const std::vector<MentionAnnotation>& mentions,
                                  const std::vector<EntityClass>& classes) {
  std::vector<BioLabel> joint(tokens.size());
  for (EntityClass c : classes) {
    auto per_class = align_annotations(tokens, mentions, c);
    for (size_t t = 0; t < tokens.size(); ++t) {
      if (joint[t].is_outside() && !per_class[t].is_outside()) joint[t] = per_class[t];
    }
  }
  return joint;
}

std::vector<MentionAnnotation> decode_mentions(const TaggedSequence& seq) {
  if (seq.labels.size() != seq.tokens.size()) {
    throw ValidationError("label count does not match token count");
  }
  std::vector<MentionAnnotation> out;
  size_t run_start = 0;
  bool open = false;
  EntityClass run_cls = EntityClass::kAdverseReaction;
  auto close = [&](size_t end_token) {
    if (!open) return;
    Span local{seq.tokens[run_start].span.start, seq.tokens[end_token - 1].span.end};
    MentionAnnotation m;
    m.cls = run_cls;
    m.spans = {seq.unit.to_document(local)};
    m.surface = to_utf8(std::u32string_view(seq.unit.text).substr(local.start, local.length()));
    out.push_back(std::move(m));
    open = false;
  };
  for (size_t t = 0; t < seq.labels.size(); ++t) {
    const BioLabel& l = seq.labels[t];
    if (l.is_outside()) {
      close(t);
    } else if (l.tag == Tag::kI && open && run_cls == l.cls) {
      continue;
    } else {
      close(t);
      open = true;
      run_start = t;
      run_cls = l.cls;
    }
  }
  close(seq.labels.size());
  return out;
}

std::vector<MentionAnnotation> project_to_unit(const TextUnit& unit,
                                               const std::vector<MentionAnnotation>& mentions) {
  std::vector<MentionAnnotation> out;
  for (const auto& m : mentions) {
    if (m.spans.empty()) continue;
    if (auto local = unit.to_local(m.extent())) {
      MentionAnnotation p = m;
      p.spans = {*local};
      out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace adrtag
