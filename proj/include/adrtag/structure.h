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

#ifndef ADRTAG_STRUCTURE_H_
#define ADRTAG_STRUCTURE_H_

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "adrtag/corpus.h"

namespace adrtag {

// Recovers headings, tables, asterisk lists and paragraphs from the flat text
// of a drug label, and cuts the result into text units for tagging.

enum class ElementKind { kHeading, kTable, kList, kParagraph };

std::string_view element_kind_name(ElementKind kind);

struct Cell {
  std::u32string text;
  Span extent;
};

struct Row {
  std::vector<Cell> cells;
  Span extent;
};

struct Table {
  std::vector<Row> caption_rows;
  std::vector<Row> header_rows;
  std::vector<Row> content_rows;
  std::vector<Row> footer_rows;
};

struct ListItem {
  std::u32string text;  // without the leading asterisk
  Span extent;
};

struct ListElement {
  std::vector<ListItem> items;
};

struct Heading {
  std::u32string number;
  std::u32string title;
};

struct Paragraph {};

struct DocumentElement {
  ElementKind kind = ElementKind::kParagraph;
  Span extent;
  std::variant<Paragraph, Heading, Table, ListElement> payload;
};

struct StructuredDocument {
  std::u32string text;
  std::vector<DocumentElement> elements;
};

// One physical line of text; the extent excludes surrounding whitespace.
struct CandidateLine {
  std::u32string text;
  Span extent;
};

StructuredDocument parse_structure(std::u32string_view text);

// The first line is the caption trigger; every other line is assigned to
// exactly one of caption, header, content or footer.
Table classify_table_rows(std::span<const CandidateLine> lines);

// Splits a row on tabs, or on runs of two or more spaces when it has no tab.
std::vector<Cell> split_cells(const CandidateLine& line);

// A cell is numeric when at least half of its non-space characters are
// digits or one of "%.()-".
bool is_numeric_cell(std::u32string_view text);

bool is_caption_trigger(std::u32string_view line);
// Returns (number, title) when the line is a numbered heading.
std::optional<Heading> match_heading(std::u32string_view line);

enum class SplitStrategy { kWholeElement, kSubElement };

struct UnitOrigin {
  size_t element = 0;
  std::optional<size_t> sub_index;  // empty for whole elements
  auto operator<=>(const UnitOrigin&) const = default;
};

// A piece of document text handed to the tokenizer and the taggers. Local
// offsets map to document offsets by a constant shift.
struct TextUnit {
  std::u32string text;
  size_t doc_offset = 0;
  UnitOrigin origin;

  size_t to_document(size_t local) const { return doc_offset + local; }
  Span to_document(Span local) const {
    return {doc_offset + local.start, doc_offset + local.end};
  }
  // Document span clipped to this unit, in local offsets; nullopt if disjoint.
  std::optional<Span> to_local(Span document) const;
};

std::vector<TextUnit> split_document(const StructuredDocument& doc,
                                     SplitStrategy strategy);

// Deterministic JSON rendering used by the `parse` subcommand and the golden
// files: {"elements": [{"kind", "extent", ...kind-specific fields}]}.
std::string structure_to_json(const StructuredDocument& doc);

}  // namespace adrtag

#endif  // ADRTAG_STRUCTURE_H_
