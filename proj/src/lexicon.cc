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

#include "adrtag/lexicon.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "adrtag/errors.h"
#include "adrtag/tokenization.h"
#include "adrtag/utf8.h"

namespace adrtag {
namespace {

size_t word_count(std::string_view phrase) {
  if (phrase.empty()) return 0;
  return static_cast<size_t>(std::count(phrase.begin(), phrase.end(), ' ')) + 1;
}

std::vector<std::string_view> lines_of(std::string_view content) {
  std::vector<std::string_view> out;
  size_t b = 0;
  while (b <= content.size()) {
    size_t e = content.find('\n', b);
    if (e == std::string_view::npos) e = content.size();
    out.push_back(content.substr(b, e - b));
    b = e + 1;
  }
  return out;
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool has_vowel(std::string_view s) { return std::any_of(s.begin(), s.end(), is_vowel); }

bool ends_with(std::string_view s, std::string_view suffix) { return s.ends_with(suffix); }

// "stopped" -> "stop", but "falls" style doubles are kept.
std::string undouble(std::string stem) {
  const size_t n = stem.size();
  if (n >= 2 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) &&
      stem[n - 1] != 'l' && stem[n - 1] != 's' && stem[n - 1] != 'z') {
    stem.pop_back();
  }
  return stem;
}

}  // namespace

Lexicon::Lexicon(std::string name, const std::vector<std::string>& phrases)
    : name_(std::move(name)) {
  for (const auto& p : phrases) add(p);
}

bool Lexicon::contains(std::string_view phrase) const {
  return entries_.count(std::string(phrase)) > 0;
}

void Lexicon::add(std::string_view phrase) {
  std::string norm = normalize_phrase(phrase);
  if (norm.empty()) return;
  max_phrase_len_ = std::max(max_phrase_len_, word_count(norm));
  entries_.insert(std::move(norm));
}

std::vector<std::string> Lexicon::entries() const {
  std::vector<std::string> out(entries_.begin(), entries_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PhraseMatch> find_matches(const Lexicon& lexicon,
                                      const std::vector<std::string>& tokens) {
  std::vector<PhraseMatch> matches;
  size_t i = 0;
  while (i < tokens.size()) {
    size_t best = 0;
    std::string phrase;
    const size_t limit = std::min(lexicon.max_phrase_len(), tokens.size() - i);
    for (size_t len = 1; len <= limit; ++len) {
      if (len > 1) phrase.push_back(' ');
      phrase += tokens[i + len - 1];
      if (lexicon.contains(phrase)) best = len;
    }
    if (best > 0) {
      matches.push_back({i, i + best});
      i += best;
    } else {
      ++i;
    }
  }
  return matches;
}

std::vector<PhraseMatch> find_matches(const Lexicon& lexicon, const std::vector<Token>& tokens) {
  std::vector<std::string> norm;
  norm.reserve(tokens.size());
  for (const auto& t : tokens) norm.push_back(to_lower(t.surface));
  return find_matches(lexicon, norm);
}

Lexicon parse_lexicon(std::string name, std::string_view content) {
  Lexicon lex(std::move(name), {});
  for (std::string_view line : lines_of(content)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    lex.add(line);
  }
  return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path, std::string name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read lexicon " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_lexicon(std::move(name), ss.str());
}

std::string format_lexicon(const Lexicon& lexicon) {
  std::string out = "# " + lexicon.name() + "\n";
  for (const auto& e : lexicon.entries()) out += e + "\n";
  return out;
}

Lexicon harvest_lexicon(const std::vector<AnnotatedDocument>& docs, EntityClass cls,
                        std::string name) {
  Lexicon lex(std::move(name), {});
  for (const auto& doc : docs) {
    for (const auto& m : doc.annotations) {
      if (m.cls != cls) continue;
      // Re-tokenize so the entry matches the tokenizer's spacing.
      std::string phrase;
      for (const auto& t : tokenize(to_u32(m.surface))) {
        if (!phrase.empty()) phrase.push_back(' ');
        phrase += t.surface;
      }
      lex.add(phrase);
    }
  }
  return lex;
}

std::string SuffixLemmatizer::lemma(std::string_view word) const {
  std::string w = to_lower(word);
  if (w.size() <= 3) return w;
  if (ends_with(w, "ies") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
  if (ends_with(w, "sses")) return w.substr(0, w.size() - 2);
  if (ends_with(w, "ss") || ends_with(w, "us") || ends_with(w, "is")) return w;
  if (ends_with(w, "es")) {
    std::string_view stem = std::string_view(w).substr(0, w.size() - 2);
    if (stem.ends_with("s") || stem.ends_with("x") || stem.ends_with("z") ||
        stem.ends_with("ch") || stem.ends_with("sh")) {
      return std::string(stem);
    }
  }
  if (ends_with(w, "s") && !ends_with(w, "'s")) return w.substr(0, w.size() - 1);
  if (ends_with(w, "ing")) {
    std::string stem = w.substr(0, w.size() - 3);
    if (stem.size() >= 3 && has_vowel(stem)) return undouble(stem);
    return w;
  }
  if (ends_with(w, "ed")) {
    std::string stem = w.substr(0, w.size() - 2);
    if (stem.size() >= 3 && has_vowel(stem)) return undouble(stem);
    return w;
  }
  return w;
}

std::string RulePosTagger::tag_word(std::string_view word) const {
  struct WordTag {
    std::string_view word;
    std::string_view tag;
  };
  static constexpr std::array<WordTag, 58> kWords = {{
      {"the", "DT"},     {"a", "DT"},       {"an", "DT"},       {"this", "DT"},
      {"these", "DT"},   {"that", "WDT"},   {"those", "DT"},    {"no", "DT"},
      {"any", "DT"},     {"all", "DT"},     {"some", "DT"},     {"each", "DT"},
      {"of", "IN"},      {"in", "IN"},      {"on", "IN"},       {"at", "IN"},
      {"with", "IN"},    {"without", "IN"}, {"by", "IN"},       {"for", "IN"},
      {"from", "IN"},    {"during", "IN"},  {"after", "IN"},    {"before", "IN"},
      {"than", "IN"},    {"to", "TO"},      {"and", "CC"},      {"or", "CC"},
      {"but", "CC"},     {"not", "RB"},     {"never", "RB"},    {"very", "RB"},
      {"is", "VBZ"},     {"are", "VBP"},    {"was", "VBD"},     {"were", "VBD"},
      {"be", "VB"},      {"been", "VBN"},   {"has", "VBZ"},     {"have", "VBP"},
      {"had", "VBD"},    {"may", "MD"},     {"can", "MD"},      {"could", "MD"},
      {"should", "MD"},  {"will", "MD"},    {"would", "MD"},    {"must", "MD"},
      {"it", "PRP"},     {"they", "PRP"},   {"patients", "NNS"}, {"which", "WDT"},
      {"who", "WP"},     {"most", "RBS"},   {"more", "RBR"},    {"less", "RBR"},
      {"if", "IN"},      {"as", "IN"},
  }};
  struct SuffixTag {
    std::string_view suffix;
    std::string_view tag;
  };
  static constexpr std::array<SuffixTag, 17> kSuffixes = {{
      {"tion", "NN"}, {"sion", "NN"}, {"ness", "NN"}, {"ment", "NN"}, {"ity", "NN"},
      {"ism", "NN"},  {"emia", "NN"}, {"itis", "NN"}, {"ly", "RB"},   {"ing", "VBG"},
      {"ed", "VBN"},  {"ous", "JJ"},  {"ful", "JJ"},  {"ive", "JJ"},  {"able", "JJ"},
      {"ible", "JJ"}, {"al", "JJ"},
  }};
  if (word.empty()) return "UNK";
  std::u32string u = to_u32(word);
  if (u.size() == 1 && is_detachable_punct(u[0])) return std::string(word);
  if (std::all_of(u.begin(), u.end(),
                  [](char32_t c) { return is_digit(c) || c == U'.' || c == U','; })) {
    return "CD";
  }
  if (std::any_of(u.begin(), u.end(), is_digit)) return "CD";
  const std::string lower = to_lower(word);
  for (const auto& wt : kWords) {
    if (wt.word == lower) return std::string(wt.tag);
  }
  if (lower.find('-') != std::string::npos) return "JJ";
  for (const auto& st : kSuffixes) {
    if (lower.size() > st.suffix.size() + 2 && lower.ends_with(st.suffix)) {
      return std::string(st.tag);
    }
  }
  if (lower.size() > 3 && lower.ends_with("s") && !lower.ends_with("ss")) return "NNS";
  if (!u.empty() && u[0] >= U'A' && u[0] <= U'Z') return "NNP";
  return "NN";
}

std::vector<std::string> RulePosTagger::annotate(const std::vector<Token>& tokens) const {
  std::vector<std::string> tags;
  tags.reserve(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) {
    std::string tag = tag_word(tokens[i].surface);
    // Sentence-initial capitals are not proper nouns.
    if (tag == "NNP" && (i == 0 || tokens[i - 1].surface == ".")) tag = tag_word(to_lower(tokens[i].surface));
    tags.push_back(std::move(tag));
  }
  return tags;
}

LexiconSemanticTagger::LexiconSemanticTagger(
    std::unordered_map<std::string, std::string> phrase_types) {
  for (auto& [phrase, type] : phrase_types) {
    std::string norm = normalize_phrase(phrase);
    phrases_.add(norm);
    types_[norm] = type;
  }
}

std::vector<std::string> LexiconSemanticTagger::annotate(const std::vector<Token>& tokens) const {
  std::vector<std::string> tags(tokens.size(), "UNK");
  std::vector<std::string> norm;
  norm.reserve(tokens.size());
  for (const auto& t : tokens) norm.push_back(to_lower(t.surface));
  for (const auto& m : find_matches(phrases_, norm)) {
    std::string phrase;
    for (size_t i = m.begin; i < m.end; ++i) {
      if (i > m.begin) phrase.push_back(' ');
      phrase += norm[i];
    }
    const std::string& type = types_.at(phrase);
    for (size_t i = m.begin; i < m.end; ++i) tags[i] = type;
  }
  return tags;
}

std::unordered_map<std::string, std::string> parse_phrase_types(std::string_view content) {
  std::unordered_map<std::string, std::string> out;
  for (std::string_view line : lines_of(content)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw ValidationError("phrase type line without tab: '" + std::string(line) + "'");
    }
    out[normalize_phrase(line.substr(0, tab))] = std::string(trim(line.substr(tab + 1)));
  }
  return out;
}

}  // namespace adrtag
