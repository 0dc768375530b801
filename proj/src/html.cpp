// Copyright 2026 The tsr Authors
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

#include "tsr/html.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <vector>

#include "tsr/errors.h"

namespace tsr {
namespace {

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += ch;
  }
  return out;
}

struct Tag {
  std::string name;  // lowercase, without '/'
  bool closing = false;
  std::map<std::string, std::string> attrs;
};

Tag parse_tag(std::string_view body, std::size_t offset) {
  Tag tag;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
  };
  skip_ws();
  if (i < body.size() && body[i] == '/') {
    tag.closing = true;
    ++i;
  }
  const std::size_t name_start = i;
  while (i < body.size() && !std::isspace(static_cast<unsigned char>(body[i])) && body[i] != '/') {
    ++i;
  }
  tag.name = to_lower(body.substr(name_start, i - name_start));
  if (tag.name.empty()) {
    throw ParseError("empty tag name at offset " + std::to_string(offset));
  }
  while (true) {
    skip_ws();
    if (i >= body.size() || body[i] == '/') break;
    const std::size_t key_start = i;
    while (i < body.size() && body[i] != '=' && !std::isspace(static_cast<unsigned char>(body[i])) &&
           body[i] != '/') {
      ++i;
    }
    std::string key = to_lower(body.substr(key_start, i - key_start));
    skip_ws();
    std::string value;
    if (i < body.size() && body[i] == '=') {
      ++i;
      skip_ws();
      if (i < body.size() && (body[i] == '"' || body[i] == '\'')) {
        const char quote = body[i++];
        const std::size_t end = body.find(quote, i);
        if (end == std::string_view::npos) {
          throw ParseError("unterminated attribute value at offset " + std::to_string(offset));
        }
        value = decode_entities(body.substr(i, end - i));
        i = end + 1;
      } else {
        const std::size_t v_start = i;
        while (i < body.size() && !std::isspace(static_cast<unsigned char>(body[i]))) ++i;
        value = decode_entities(body.substr(v_start, i - v_start));
      }
    }
    if (!key.empty()) tag.attrs[key] = value;
  }
  return tag;
}

int parse_span(const Tag& tag, const std::string& attr) {
  auto it = tag.attrs.find(attr);
  if (it == tag.attrs.end()) return 1;
  const std::string& v = it->second;
  int value = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ParseError(attr + " is not an integer: \"" + v + "\"");
  }
  if (value < 1) throw StructureError(attr + " must be positive, got " + v);
  return value;
}

struct RawCell {
  int row_span = 1;
  int col_span = 1;
  std::string text;
};

}  // namespace

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '&') {
      out += text[i];
      continue;
    }
    const std::size_t semi = text.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out += '&';
      continue;
    }
    const std::string_view name = text.substr(i + 1, semi - i - 1);
    if (name == "amp") {
      out += '&';
    } else if (name == "lt") {
      out += '<';
    } else if (name == "gt") {
      out += '>';
    } else if (name == "quot") {
      out += '"';
    } else if (name == "apos") {
      out += '\'';
    } else if (name == "nbsp") {
      out += ' ';
    } else if (name.size() > 1 && name[0] == '#') {
      unsigned long cp = 0;
      const bool hex = name[1] == 'x' || name[1] == 'X';
      const std::string_view digits = name.substr(hex ? 2 : 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
      if (ec != std::errc() || ptr != digits.data() + digits.size()) {
        out += '&';
        continue;
      }
      append_utf8(out, cp);
    } else {
      out += '&';
      continue;
    }
    i = semi;
  }
  return out;
}

std::string escape_html(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += ch;
    }
  }
  return out;
}

HtmlTable parse_html(std::string_view html, const HtmlParseOptions& options) {
  std::vector<std::vector<RawCell>> rows;
  int tables_seen = 0;
  bool in_table = false;
  bool table_closed = false;
  bool in_row = false;
  RawCell* cell = nullptr;

  auto close_cell = [&] { cell = nullptr; };
  auto close_row = [&] {
    close_cell();
    in_row = false;
  };

  std::size_t i = 0;
  while (i < html.size()) {
    if (html[i] == '<') {
      if (html.compare(i, 4, "<!--") == 0) {
        const std::size_t end = html.find("-->", i + 4);
        if (end == std::string_view::npos) throw ParseError("unterminated comment");
        i = end + 3;
        continue;
      }
      if (i + 1 < html.size() && (html[i + 1] == '!' || html[i + 1] == '?')) {
        const std::size_t end = html.find('>', i);
        if (end == std::string_view::npos) throw ParseError("unterminated declaration");
        i = end + 1;
        continue;
      }
      // Find the closing '>' while honouring quoted attribute values.
      std::size_t j = i + 1;
      char quote = 0;
      for (; j < html.size(); ++j) {
        const char ch = html[j];
        if (quote) {
          if (ch == quote) quote = 0;
        } else if (ch == '"' || ch == '\'') {
          quote = ch;
        } else if (ch == '>') {
          break;
        }
      }
      if (j >= html.size()) throw ParseError("unterminated tag at offset " + std::to_string(i));
      const Tag tag = parse_tag(html.substr(i + 1, j - i - 1), i);
      i = j + 1;

      if (tag.name == "table") {
        if (tag.closing) {
          if (!in_table) throw ParseError("</table> without <table>");
          close_row();
          in_table = false;
          table_closed = true;
        } else {
          ++tables_seen;
          if (tables_seen > 1) throw StructureError("expected exactly one table element");
          in_table = true;
        }
      } else if (!in_table) {
        continue;
      } else if (tag.name == "tr") {
        close_row();
        if (!tag.closing) {
          rows.emplace_back();
          in_row = true;
        }
      } else if (tag.name == "td" || tag.name == "th") {
        if (tag.closing) {
          close_cell();
        } else {
          if (!in_row) throw StructureError("<" + tag.name + "> outside of a table row");
          RawCell raw;
          raw.row_span = parse_span(tag, "rowspan");
          raw.col_span = parse_span(tag, "colspan");
          rows.back().push_back(std::move(raw));
          cell = &rows.back().back();
        }
      } else if (tag.name == "thead" || tag.name == "tbody" || tag.name == "tfoot") {
        close_row();
      } else if (tag.name == "br") {
        if (cell) cell->text += ' ';
      }
      // Other inline markup inside cells contributes its text only.
      continue;
    }
    const std::size_t next = html.find('<', i);
    const std::string_view chunk = html.substr(i, next == std::string_view::npos ? std::string_view::npos : next - i);
    if (cell) cell->text += decode_entities(chunk);
    i = next == std::string_view::npos ? html.size() : next;
  }

  if (tables_seen == 0) throw StructureError("no table element found");
  if (in_table && !table_closed) throw ParseError("unterminated table element");

  std::size_t n_cells = 0;
  for (const auto& row : rows) n_cells += row.size();
  if (n_cells == 0) throw StructureError("table has no cells");

  // Slot filling. kReserved holds slots of blank spanning cells until the end.
  constexpr CellId kReserved = -2;
  const int n_rows = static_cast<int>(rows.size());
  std::vector<std::vector<CellId>> occ(n_rows);
  HtmlTable out;
  CellId next_id = 0;
  int n_cols = 0;
  for (int r = 0; r < n_rows; ++r) {
    int c = 0;
    for (RawCell& raw : rows[r]) {
      const CellId id = next_id++;
      while (c < static_cast<int>(occ[r].size()) && occ[r][c] != kBlank) ++c;
      if (r + raw.row_span > n_rows) {
        throw StructureError("rowspan of cell " + std::to_string(id) + " runs past the last row");
      }
      std::string text = collapse_whitespace(raw.text);
      const bool blank = options.blank_empty_cells && text.empty();
      for (int rr = r; rr < r + raw.row_span; ++rr) {
        auto& line = occ[rr];
        if (static_cast<int>(line.size()) < c + raw.col_span) line.resize(c + raw.col_span, kBlank);
        for (int cc = c; cc < c + raw.col_span; ++cc) {
          if (line[cc] != kBlank) {
            throw StructureError("cell " + std::to_string(id) + " overlaps a spanning cell at (" +
                                 std::to_string(rr) + "," + std::to_string(cc) + ")");
          }
          line[cc] = blank ? kReserved : id;
        }
      }
      if (!blank) out.texts.emplace(id, std::move(text));
      c += raw.col_span;
      n_cols = std::max(n_cols, c);
    }
  }
  for (const auto& line : occ) n_cols = std::max(n_cols, static_cast<int>(line.size()));

  out.grid = CellGrid(n_rows, n_cols);
  for (int r = 0; r < n_rows; ++r) {
    for (int c = 0; c < static_cast<int>(occ[r].size()); ++c) {
      const CellId id = occ[r][c];
      out.grid.set(r, c, id == kReserved ? kBlank : id);
    }
  }
  return out;
}

CellGrid parse_html_table(std::string_view html) { return parse_html(html).grid; }

std::string emit_html(const CellGrid& grid, const std::map<CellId, std::string>& texts) {
  const auto extents = grid.extents();
  if (grid.rows() < 1 || grid.cols() < 1) throw StructureError("cannot emit an empty grid");
  std::string out = "<table>";
  for (int r = 0; r < grid.rows(); ++r) {
    out += "<tr>";
    for (int c = 0; c < grid.cols(); ++c) {
      const CellId id = grid.at(r, c);
      if (id == kBlank) {
        out += "<td></td>";
        continue;
      }
      const CellExtent& e = extents.at(id);
      if (e.row != r || e.col != c) continue;
      out += "<td";
      if (e.row_span > 1) out += " rowspan=\"" + std::to_string(e.row_span) + "\"";
      if (e.col_span > 1) out += " colspan=\"" + std::to_string(e.col_span) + "\"";
      out += ">";
      if (auto it = texts.find(id); it != texts.end()) out += escape_html(it->second);
      out += "</td>";
    }
    out += "</tr>";
  }
  out += "</table>";
  return out;
}

}  // namespace tsr
