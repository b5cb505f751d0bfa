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

#ifndef ADRTAG_LEXICON_H_
#define ADRTAG_LEXICON_H_

#include <filesystem>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "adrtag/corpus.h"

namespace adrtag {

struct Token;

// A named set of normalized phrases (lowercase, single-spaced) matched
// against token n-grams.
class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(std::string name, const std::vector<std::string>& phrases);

  const std::string& name() const { return name_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  size_t max_phrase_len() const { return max_phrase_len_; }
  bool contains(std::string_view phrase) const;
  void add(std::string_view phrase);
  // Entries in sorted order.
  std::vector<std::string> entries() const;

 private:
  std::string name_;
  std::unordered_set<std::string> entries_;
  size_t max_phrase_len_ = 0;
};

// Token range [begin, end) matched by a lexicon entry.
struct PhraseMatch {
  size_t begin = 0;
  size_t end = 0;
};

// Greedy left-to-right longest match over lowercased token surfaces;
// matches never overlap.
std::vector<PhraseMatch> find_matches(const Lexicon& lexicon,
                                      const std::vector<std::string>& normalized_tokens);
std::vector<PhraseMatch> find_matches(const Lexicon& lexicon, const std::vector<Token>& tokens);

// One phrase per line, '#' starts a comment line.
Lexicon parse_lexicon(std::string name, std::string_view content);
Lexicon load_lexicon(const std::filesystem::path& path, std::string name);
std::string format_lexicon(const Lexicon& lexicon);

// Every gold surface form of `cls` found in `docs`.
Lexicon harvest_lexicon(const std::vector<AnnotatedDocument>& docs, EntityClass cls,
                        std::string name);

// Maps words to base forms before embedding lookup and feature extraction.
class Lemmatizer {
 public:
  virtual ~Lemmatizer() = default;
  virtual std::string lemma(std::string_view word) const = 0;
};

// Lowercasing plus plural, -ing and -ed stripping.
class SuffixLemmatizer : public Lemmatizer {
 public:
  std::string lemma(std::string_view word) const override;
};

// Assigns one tag per token, using the whole sequence as context. Must be
// total: tokens without an opinion get "UNK".
class TokenAnnotator {
 public:
  virtual ~TokenAnnotator() = default;
  virtual std::string_view id() const = 0;
  virtual std::vector<std::string> annotate(const std::vector<Token>& tokens) const = 0;
};

// Word lists plus suffix rules producing Penn-style tags.
class RulePosTagger : public TokenAnnotator {
 public:
  std::string_view id() const override { return "pos"; }
  std::vector<std::string> annotate(const std::vector<Token>& tokens) const override;
  std::string tag_word(std::string_view word) const;
};

// Longest-match phrase table mapping to semantic type codes.
class LexiconSemanticTagger : public TokenAnnotator {
 public:
  explicit LexiconSemanticTagger(std::unordered_map<std::string, std::string> phrase_types);
  std::string_view id() const override { return "semtype"; }
  std::vector<std::string> annotate(const std::vector<Token>& tokens) const override;

 private:
  std::unordered_map<std::string, std::string> types_;
  Lexicon phrases_;
};

// "phrase<TAB>type" lines.
std::unordered_map<std::string, std::string> parse_phrase_types(std::string_view content);

}  // namespace adrtag

#endif  // ADRTAG_LEXICON_H_
