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

#include "adrtag/corpus.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "adrtag/errors.h"
#include "adrtag/log.h"
#include "adrtag/numeric_io.h"
#include "adrtag/utf8.h"
#include "file_util.h"

namespace adrtag {
namespace fs = std::filesystem;

namespace {

constexpr std::array<std::string_view, kNumEntityClasses> kClassNames = {
    "AdverseReaction", "Severity", "Factor", "DrugClass", "Negation", "Animal"};

constexpr std::array<std::string_view, kNumEntityClasses> kDisplayNames = {
    "Adverse drug reaction", "Severity", "Factor",
    "Drug class",            "Negation", "Animal"};

using internal::read_file;
using internal::split;
using internal::write_file;

// Tabs and newlines cannot appear inside a standoff field.
std::string flatten_field(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

}  // namespace

std::string_view class_name(EntityClass c) { return kClassNames[class_index(c)]; }

std::string_view class_display_name(EntityClass c) {
  return kDisplayNames[class_index(c)];
}

std::optional<EntityClass> try_parse_class(std::string_view name) {
  for (EntityClass c : kAllEntityClasses) {
    if (class_name(c) == name) return c;
  }
  return std::nullopt;
}

EntityClass parse_class(std::string_view name) {
  if (auto c = try_parse_class(name)) return *c;
  throw ValidationError("unknown entity class '" + std::string(name) + "'");
}

std::string surface_of(std::u32string_view text, const std::vector<Span>& spans) {
  std::string out;
  for (size_t i = 0; i < spans.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += to_utf8(text.substr(spans[i].start, spans[i].length()));
  }
  return out;
}

std::optional<std::string> check_mention(const MentionAnnotation& m,
                                         size_t text_length) {
  if (m.spans.empty()) return "annotation " + m.id + " has no spans";
  for (size_t i = 0; i < m.spans.size(); ++i) {
    const Span& s = m.spans[i];
    const std::string where = "annotation " + m.id + " span (" +
                              std::to_string(s.start) + "," + std::to_string(s.end) + ")";
    if (s.start >= s.end) return where + ": start must be below end";
    if (s.end > text_length) {
      return where + ": outside text of length " + std::to_string(text_length);
    }
    if (i > 0 && m.spans[i - 1].end > s.start) {
      return where + ": spans must be sorted and non-overlapping";
    }
  }
  return std::nullopt;
}

AnnotationFormat parse_annotation_format(std::string_view id) {
  if (id == "standoff") return AnnotationFormat::kStandoff;
  throw ConfigError("unknown annotation format '" + std::string(id) + "'");
}

std::vector<MentionAnnotation> parse_standoff(std::string_view content,
                                              std::u32string_view text,
                                              std::string_view doc_id) {
  std::vector<MentionAnnotation> mentions;
  std::set<std::string> ids;
  size_t line_no = 0;
  for (std::string_view line : split(content, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') continue;
    const std::string where =
        std::string(doc_id) + ".ann line " + std::to_string(line_no);
    auto fields = split(line, '\t');
    if (fields.size() < 3) throw ValidationError(where + ": expected ID, CLASS and SPANS");
    MentionAnnotation m;
    m.id = std::string(fields[0]);
    if (m.id.empty()) throw ValidationError(where + ": empty annotation id");
    auto cls = try_parse_class(fields[1]);
    if (!cls) {
      throw ValidationError(where + ": unknown entity class '" + std::string(fields[1]) + "'");
    }
    m.cls = *cls;
    for (std::string_view piece : split(fields[2], ';')) {
      auto nums = split(trim(piece), ' ');
      if (nums.size() != 2) throw ValidationError(where + ": malformed span '" + std::string(piece) + "'");
      try {
        long long b = parse_int(nums[0]);
        long long e = parse_int(nums[1]);
        if (b < 0 || e < 0) throw ValidationError("negative offset");
        m.spans.push_back({static_cast<size_t>(b), static_cast<size_t>(e)});
      } catch (const ValidationError&) {
        throw ValidationError(where + ": malformed span '" + std::string(piece) + "'");
      }
    }
    if (auto problem = check_mention(m, text.size())) {
      throw ValidationError(std::string(doc_id) + ": " + *problem);
    }
    if (!ids.insert(m.id).second) {
      throw ValidationError(where + ": duplicate annotation id " + m.id);
    }
    m.surface = surface_of(text, m.spans);
    if (fields.size() > 3) {
      std::string declared(fields[3]);
      for (size_t i = 4; i < fields.size(); ++i) declared += " " + std::string(fields[i]);
      if (normalize_phrase(declared) != normalize_phrase(m.surface) &&
          declared != m.surface) {
        log_warning(where + ": surface '" + declared + "' differs from span text '" +
                    m.surface + "'");
      }
    }
    mentions.push_back(std::move(m));
  }
  return mentions;
}

std::string format_standoff(const std::vector<MentionAnnotation>& mentions) {
  std::string out;
  for (const auto& m : mentions) {
    out += m.id;
    out += '\t';
    out += class_name(m.cls);
    out += '\t';
    for (size_t i = 0; i < m.spans.size(); ++i) {
      if (i > 0) out += ';';
      out += std::to_string(m.spans[i].start) + " " + std::to_string(m.spans[i].end);
    }
    out += '\t';
    out += flatten_field(m.surface);
    out += '\n';
  }
  return out;
}

std::vector<AnnotatedDocument> load_corpus(const fs::path& path,
                                           AnnotationFormat format,
                                           bool require_annotations) {
  (void)format;  // kStandoff is the only format.
  if (!fs::is_directory(path)) throw IoError("not a directory: " + path.string());
  std::vector<fs::path> texts;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      texts.push_back(entry.path());
    }
  }
  std::sort(texts.begin(), texts.end());
  std::vector<AnnotatedDocument> docs;
  docs.reserve(texts.size());
  for (const auto& txt : texts) {
    AnnotatedDocument doc;
    doc.doc_id = txt.stem().string();
    try {
      doc.text = to_u32(read_file(txt));
    } catch (const ValidationError& e) {
      throw ValidationError(doc.doc_id + ": " + e.what());
    }
    fs::path ann = txt;
    ann.replace_extension(".ann");
    if (fs::exists(ann)) {
      doc.annotations = parse_standoff(read_file(ann), doc.text, doc.doc_id);
    } else if (require_annotations) {
      throw IoError("missing annotation file " + ann.string());
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

void write_annotations(const AnnotatedDocument& doc, const fs::path& path) {
  write_file(path, format_standoff(doc.annotations));
}

void write_corpus(const std::vector<AnnotatedDocument>& docs, const fs::path& path) {
  fs::create_directories(path);
  for (const auto& doc : docs) {
    write_file(path / (doc.doc_id + ".txt"), to_utf8(doc.text));
    write_annotations(doc, path / (doc.doc_id + ".ann"));
  }
}

FilterResult filter_discontinuous(const std::vector<AnnotatedDocument>& docs) {
  FilterResult result;
  result.docs.reserve(docs.size());
  for (const auto& doc : docs) {
    AnnotatedDocument kept{doc.doc_id, doc.text, {}};
    for (const auto& m : doc.annotations) {
      if (m.discontinuous()) {
        ++result.dropped_count;
      } else {
        kept.annotations.push_back(m);
      }
    }
    result.docs.push_back(std::move(kept));
  }
  return result;
}

CorpusStats compute_stats(const std::vector<AnnotatedDocument>& docs,
                          const SpanTokenizer& tokenizer) {
  CorpusStats stats;
  for (const auto& doc : docs) {
    std::u32string_view text = doc.text;
    for (const auto& m : doc.annotations) {
      auto& cs = stats[m.cls];
      ++cs.mention_count;
      for (const Span& s : m.spans) {
        cs.token_count += tokenizer(text.substr(s.start, s.length())).size();
      }
    }
  }
  return stats;
}

std::string format_stats(const CorpusStats& stats) {
  std::ostringstream out;
  auto row = [&out](std::string_view a, std::string_view b, std::string_view c,
                    std::string_view d) {
    std::string first(a);
    first.resize(std::max<size_t>(first.size(), 24), ' ');
    auto pad = [](std::string_view s) {
      std::string r(s);
      return std::string(r.size() < 12 ? 12 - r.size() : 0, ' ') + r;
    };
    out << first << pad(b) << pad(c) << pad(d) << '\n';
  };
  row("Entity class", "#mentions", "#tokens", "Avg.tk/men");
  for (EntityClass c : kAllEntityClasses) {
    const auto& cs = stats[c];
    row(class_display_name(c), std::to_string(cs.mention_count),
        std::to_string(cs.token_count), format_fixed(cs.avg_tokens_per_mention(), 2));
  }
  return out.str();
}

}  // namespace adrtag
