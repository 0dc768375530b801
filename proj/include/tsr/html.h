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

#pragma once

#include <map>
#include <string>
#include <string_view>

#include "tsr/cell_grid.h"

namespace tsr {

struct HtmlParseOptions {
  // Treat a td/th without text content as blank slots instead of a cell.
  bool blank_empty_cells = false;
};

// A parsed table: cell ids are the zero-based document order of td/th
// elements, texts hold whitespace-collapsed cell content.
struct HtmlTable {
  CellGrid grid;
  std::map<CellId, std::string> texts;
};

// Parses the single table element in `html`. Rowspan/colspan expand into
// repeated slots, filled left to right and top to bottom, skipping slots
// already claimed from above. Short rows are padded with blank slots.
// Throws ParseError for malformed markup and StructureError for overlapping
// spans, spans running past the last row, or zero cells.
HtmlTable parse_html(std::string_view html, const HtmlParseOptions& options = {});

CellGrid parse_html_table(std::string_view html);

// Normalized HTML: lowercase tags, double-quoted attributes, no whitespace
// between tags, rowspan/colspan only when > 1. Blank slots become empty td.
std::string emit_html(const CellGrid& grid, const std::map<CellId, std::string>& texts);

std::string escape_html(std::string_view text);
// Named entities amp, lt, gt, quot, apos and nbsp (as a plain space), plus
// numeric references as UTF-8. Anything else is left as is.
std::string decode_entities(std::string_view text);

}  // namespace tsr
