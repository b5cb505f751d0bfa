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

#include "adrtag/structure.h"

#include <algorithm>

#include "adrtag/utf8.h"
#include "json.hpp"

namespace adrtag {
namespace {

constexpr size_t kMaxHeadingTitleWords = 15;

// Trimmed line extents, one per physical line.
std::vector<CandidateLine> split_lines(std::u32string_view text) {
  std::vector<CandidateLine> lines;
  size_t b = 0;
  while (b <= text.size()) {
    size_t e = text.find(U'\n', b);
    if (e == std::u32string_view::npos) e = text.size();
    size_t s = b;
    size_t t = e;
    while (s < t && is_space(text[s])) ++s;
    while (t > s && is_space(text[t - 1])) --t;
    lines.push_back({std::u32string(text.substr(s, t - s)), {s, t}});
    if (e == text.size()) break;
    b = e + 1;
  }
  return lines;
}

bool is_blank(const CandidateLine& line) { return line.text.empty(); }

bool is_bullet(const CandidateLine& line) {
  return !line.text.empty() && line.text.front() == U'*';
}

size_t count_words(std::u32string_view s) {
  size_t n = 0;
  bool in_word = false;
  for (char32_t c : s) {
    if (is_space(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++n;
    }
  }
  return n;
}

Cell whole_line_cell(const CandidateLine& line) { return {line.text, line.extent}; }

Row make_row(std::vector<Cell> cells, Span extent) { return {std::move(cells), extent}; }

ListItem make_item(const CandidateLine& line) {
  size_t skip = 1;  // the asterisk
  while (skip < line.text.size() && is_space(line.text[skip])) ++skip;
  return {line.text.substr(skip), {line.extent.start + skip, line.extent.end}};
}

nlohmann::ordered_json span_json(Span s) { return nlohmann::ordered_json::array({s.start, s.end}); }

nlohmann::ordered_json rows_json(const std::vector<Row>& rows) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json r;
    r["extent"] = span_json(row.extent);
    auto cells = nlohmann::ordered_json::array();
    for (const auto& cell : row.cells) {
      nlohmann::ordered_json c;
      c["extent"] = span_json(cell.extent);
      c["text"] = to_utf8(cell.text);
      cells.push_back(std::move(c));
    }
    r["cells"] = std::move(cells);
    arr.push_back(std::move(r));
  }
  return arr;
}

}  // namespace

std::string_view element_kind_name(ElementKind kind) {
  switch (kind) {
    case ElementKind::kHeading:
      return "heading";
    case ElementKind::kTable:
      return "table";
    case ElementKind::kList:
      return "list";
    case ElementKind::kParagraph:
      return "paragraph";
  }
  return "paragraph";
}

bool is_caption_trigger(std::u32string_view line) {
  line = trim(line);
  constexpr std::u32string_view kTable = U"Table";
  if (!line.starts_with(kTable)) return false;
  size_t i = kTable.size();
  size_t ws = i;
  while (i < line.size() && is_space(line[i])) ++i;
  if (i == ws) return false;
  // A non-space run with a dot somewhere after its first character.
  size_t run_start = i;
  while (i < line.size() && !is_space(line[i])) {
    if (line[i] == U'.' && i > run_start) return true;
    ++i;
  }
  return false;
}

std::optional<Heading> match_heading(std::u32string_view line) {
  line = trim(line);
  size_t i = 0;
  auto digits = [&] {
    size_t b = i;
    while (i < line.size() && is_digit(line[i])) ++i;
    return i > b;
  };
  if (!digits()) return std::nullopt;
  while (i + 1 < line.size() && line[i] == U'.' && is_digit(line[i + 1])) {
    ++i;
    digits();
  }
  size_t number_end = i;
  if (i < line.size() && line[i] == U'.') ++i;  // "5." style numbering
  size_t ws = i;
  while (i < line.size() && is_space(line[i])) ++i;
  if (i == ws || i >= line.size() || !is_alpha(line[i])) return std::nullopt;
  std::u32string_view title = line.substr(i);
  if (count_words(title) > kMaxHeadingTitleWords) return std::nullopt;
  return Heading{std::u32string(line.substr(0, number_end)), std::u32string(title)};
}

bool is_numeric_cell(std::u32string_view text) {
  size_t total = 0;
  size_t numeric = 0;
  for (char32_t c : text) {
    if (is_space(c)) continue;
    ++total;
    if (is_digit(c) || c == U'%' || c == U'.' || c == U'(' || c == U')' || c == U'-') {
      ++numeric;
    }
  }
  return total > 0 && 2 * numeric >= total;
}

std::vector<Cell> split_cells(const CandidateLine& line) {
  std::u32string_view text = line.text;
  const bool has_tab = text.find(U'\t') != std::u32string_view::npos;
  std::vector<Cell> cells;
  size_t b = 0;
  auto emit = [&](size_t from, size_t to) {
    while (from < to && is_space(text[from])) ++from;
    while (to > from && is_space(text[to - 1])) --to;
    if (from < to) {
      cells.push_back({std::u32string(text.substr(from, to - from)),
                       {line.extent.start + from, line.extent.start + to}});
    }
  };
  size_t i = 0;
  while (i < text.size()) {
    if (has_tab) {
      if (text[i] == U'\t') {
        emit(b, i);
        b = i + 1;
      }
      ++i;
      continue;
    }
    if (text[i] == U' ' && i + 1 < text.size() && text[i + 1] == U' ') {
      size_t j = i;
      while (j < text.size() && text[j] == U' ') ++j;
      emit(b, i);
      b = j;
      i = j;
      continue;
    }
    ++i;
  }
  emit(b, text.size());
  return cells;
}

Table classify_table_rows(std::span<const CandidateLine> lines) {
  Table table;
  if (lines.empty()) return table;
  table.caption_rows.push_back(make_row({whole_line_cell(lines[0])}, lines[0].extent));
  bool in_caption = true;
  bool in_footer = false;
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (is_blank(line)) continue;
    auto cells = split_cells(line);
    const size_t ncells = cells.size();
    const size_t nnumeric = static_cast<size_t>(std::count_if(
        cells.begin(), cells.end(), [](const Cell& c) { return is_numeric_cell(c.text); }));
    if (in_caption && ncells <= 1) {
      table.caption_rows.push_back(make_row({whole_line_cell(line)}, line.extent));
      continue;
    }
    in_caption = false;
    if (in_footer || (ncells == 1 && !table.content_rows.empty())) {
      in_footer = true;
      table.footer_rows.push_back(make_row({whole_line_cell(line)}, line.extent));
    } else if (table.content_rows.empty() && 5 * nnumeric < ncells) {
      table.header_rows.push_back(make_row(std::move(cells), line.extent));
    } else {
      table.content_rows.push_back(make_row(std::move(cells), line.extent));
    }
  }
  return table;
}

StructuredDocument parse_structure(std::u32string_view text) {
  StructuredDocument doc;
  doc.text = std::u32string(text);
  const auto lines = split_lines(text);

  std::vector<const CandidateLine*> paragraph;
  auto flush_paragraph = [&] {
    if (paragraph.empty()) return;
    DocumentElement el;
    el.kind = ElementKind::kParagraph;
    el.extent = {paragraph.front()->extent.start, paragraph.back()->extent.end};
    el.payload = Paragraph{};
    doc.elements.push_back(std::move(el));
    paragraph.clear();
  };

  size_t i = 0;
  while (i < lines.size()) {
    const auto& line = lines[i];
    if (is_blank(line)) {
      flush_paragraph();
      ++i;
      continue;
    }
    if (is_caption_trigger(line.text)) {
      flush_paragraph();
      size_t j = i;
      while (j < lines.size() && !is_blank(lines[j])) ++j;
      DocumentElement el;
      el.kind = ElementKind::kTable;
      el.extent = {line.extent.start, lines[j - 1].extent.end};
      el.payload = classify_table_rows(std::span(lines).subspan(i, j - i));
      doc.elements.push_back(std::move(el));
      i = j;
      continue;
    }
    if (auto heading = match_heading(line.text)) {
      flush_paragraph();
      DocumentElement el;
      el.kind = ElementKind::kHeading;
      el.extent = line.extent;
      el.payload = std::move(*heading);
      doc.elements.push_back(std::move(el));
      ++i;
      continue;
    }
    if (is_bullet(line)) {
      size_t j = i;
      while (j < lines.size() && is_bullet(lines[j])) ++j;
      if (j - i >= 2) {
        flush_paragraph();
        ListElement list;
        for (size_t k = i; k < j; ++k) list.items.push_back(make_item(lines[k]));
        DocumentElement el;
        el.kind = ElementKind::kList;
        el.extent = {line.extent.start, lines[j - 1].extent.end};
        el.payload = std::move(list);
        doc.elements.push_back(std::move(el));
        i = j;
        continue;
      }
    }
    paragraph.push_back(&line);
    ++i;
  }
  flush_paragraph();
  return doc;
}

std::optional<Span> TextUnit::to_local(Span document) const {
  const size_t unit_end = doc_offset + text.size();
  const size_t b = std::max(document.start, doc_offset);
  const size_t e = std::min(document.end, unit_end);
  if (b >= e) return std::nullopt;
  return Span{b - doc_offset, e - doc_offset};
}

std::vector<TextUnit> split_document(const StructuredDocument& doc,
                                     SplitStrategy strategy) {
  std::vector<TextUnit> units;
  auto slice = [&](Span s, UnitOrigin origin) {
    units.push_back({doc.text.substr(s.start, s.length()), s.start, origin});
  };
  for (size_t e = 0; e < doc.elements.size(); ++e) {
    const auto& el = doc.elements[e];
    if (strategy == SplitStrategy::kWholeElement || el.kind == ElementKind::kHeading ||
        el.kind == ElementKind::kParagraph) {
      slice(el.extent, {e, std::nullopt});
      continue;
    }
    size_t sub = 0;
    if (const auto* list = std::get_if<ListElement>(&el.payload)) {
      for (const auto& item : list->items) {
        if (item.extent.length() > 0) slice(item.extent, {e, sub});
        ++sub;
      }
    } else if (const auto* table = std::get_if<Table>(&el.payload)) {
      auto whole_rows = [&](const std::vector<Row>& rows) {
        for (const auto& row : rows) slice(row.extent, {e, sub++});
      };
      auto cell_rows = [&](const std::vector<Row>& rows) {
        for (const auto& row : rows) {
          for (const auto& cell : row.cells) slice(cell.extent, {e, sub++});
        }
      };
      whole_rows(table->caption_rows);
      cell_rows(table->header_rows);
      cell_rows(table->content_rows);
      whole_rows(table->footer_rows);
    }
  }
  return units;
}

std::string structure_to_json(const StructuredDocument& doc) {
  using nlohmann::ordered_json;
  ordered_json root;
  auto elements = ordered_json::array();
  for (const auto& el : doc.elements) {
    ordered_json j;
    j["kind"] = std::string(element_kind_name(el.kind));
    j["extent"] = span_json(el.extent);
    switch (el.kind) {
      case ElementKind::kHeading: {
        const auto& h = std::get<Heading>(el.payload);
        j["number"] = to_utf8(h.number);
        j["title"] = to_utf8(h.title);
        break;
      }
      case ElementKind::kTable: {
        const auto& t = std::get<Table>(el.payload);
        j["caption"] = rows_json(t.caption_rows);
        j["header"] = rows_json(t.header_rows);
        j["content"] = rows_json(t.content_rows);
        j["footer"] = rows_json(t.footer_rows);
        break;
      }
      case ElementKind::kList: {
        auto items = ordered_json::array();
        for (const auto& item : std::get<ListElement>(el.payload).items) {
          ordered_json it;
          it["extent"] = span_json(item.extent);
          it["text"] = to_utf8(item.text);
          items.push_back(std::move(it));
        }
        j["items"] = std::move(items);
        break;
      }
      case ElementKind::kParagraph:
        j["text"] = to_utf8(std::u32string_view(doc.text).substr(el.extent.start,
                                                                 el.extent.length()));
        break;
    }
    elements.push_back(std::move(j));
  }
  root["elements"] = std::move(elements);
  return root.dump(2) + "\n";
}

}  // namespace adrtag
