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

#ifndef ADRTAG_CORPUS_H_
#define ADRTAG_CORPUS_H_

#include <array>
#include <compare>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace adrtag {

enum class EntityClass {
  kAdverseReaction,
  kSeverity,
  kFactor,
  kDrugClass,
  kNegation,
  kAnimal,
};

inline constexpr std::array<EntityClass, 6> kAllEntityClasses = {
    EntityClass::kAdverseReaction, EntityClass::kSeverity, EntityClass::kFactor,
    EntityClass::kDrugClass,       EntityClass::kNegation, EntityClass::kAnimal,
};
inline constexpr size_t kNumEntityClasses = kAllEntityClasses.size();

inline size_t class_index(EntityClass c) { return static_cast<size_t>(c); }

// Canonical serialization name, e.g. "AdverseReaction".
std::string_view class_name(EntityClass c);
// Human readable name used in report tables, e.g. "Adverse drug reaction".
std::string_view class_display_name(EntityClass c);
// Throws ValidationError for unknown names.
EntityClass parse_class(std::string_view name);
std::optional<EntityClass> try_parse_class(std::string_view name);

// Half-open interval of code-point offsets.
struct Span {
  size_t start = 0;
  size_t end = 0;

  size_t length() const { return end - start; }
  bool overlaps(const Span& other) const {
    return start < other.end && other.start < end;
  }
  bool contains(size_t offset) const { return offset >= start && offset < end; }
  auto operator<=>(const Span&) const = default;
};

struct MentionAnnotation {
  std::string id;
  EntityClass cls = EntityClass::kAdverseReaction;
  std::vector<Span> spans;
  std::string surface;

  bool discontinuous() const { return spans.size() > 1; }
  // Smallest span covering every piece.
  Span extent() const { return {spans.front().start, spans.back().end}; }
};

struct AnnotatedDocument {
  std::string doc_id;
  std::u32string text;
  std::vector<MentionAnnotation> annotations;
};

// Span texts joined by a single space, UTF-8 encoded.
std::string surface_of(std::u32string_view text, const std::vector<Span>& spans);

// Checks spans (non-empty, ordered, disjoint, within bounds) and returns a
// ValidationError message, or nullopt when the mention is well formed.
std::optional<std::string> check_mention(const MentionAnnotation& mention,
                                         size_t text_length);

enum class AnnotationFormat { kStandoff };
AnnotationFormat parse_annotation_format(std::string_view id);

// Parses the body of a standoff file against its document text.
std::vector<MentionAnnotation> parse_standoff(std::string_view content,
                                              std::u32string_view text,
                                              std::string_view doc_id);
std::string format_standoff(const std::vector<MentionAnnotation>& mentions);

// Loads every <id>.txt in `path` together with its <id>.ann. Documents are
// returned sorted by id. When `require_annotations` is false a missing .ann
// yields a document with no annotations.
std::vector<AnnotatedDocument> load_corpus(
    const std::filesystem::path& path,
    AnnotationFormat format = AnnotationFormat::kStandoff,
    bool require_annotations = true);

void write_corpus(const std::vector<AnnotatedDocument>& docs,
                  const std::filesystem::path& path);
void write_annotations(const AnnotatedDocument& doc,
                       const std::filesystem::path& path);

struct FilterResult {
  std::vector<AnnotatedDocument> docs;
  size_t dropped_count = 0;
};

// Removes multi-span annotations.
FilterResult filter_discontinuous(const std::vector<AnnotatedDocument>& docs);

struct ClassStats {
  size_t mention_count = 0;
  size_t token_count = 0;
  double avg_tokens_per_mention() const {
    return mention_count == 0 ? 0.0
                              : static_cast<double>(token_count) / mention_count;
  }
};

struct CorpusStats {
  std::array<ClassStats, kNumEntityClasses> per_class{};
  const ClassStats& operator[](EntityClass c) const { return per_class[class_index(c)]; }
  ClassStats& operator[](EntityClass c) { return per_class[class_index(c)]; }
};

// Returns the token spans of a piece of text.
using SpanTokenizer = std::function<std::vector<Span>(std::u32string_view)>;

CorpusStats compute_stats(const std::vector<AnnotatedDocument>& docs,
                          const SpanTokenizer& tokenizer);

// Aligned text table in the layout of the published corpus summary.
std::string format_stats(const CorpusStats& stats);

}  // namespace adrtag

#endif  // ADRTAG_CORPUS_H_
