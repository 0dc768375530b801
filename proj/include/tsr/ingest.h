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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsr/cell_grid.h"
#include "tsr/types.h"

namespace tsr {

// Annotated table as loaded from a dataset. Blank cells (no content) are
// blank grid slots and have no entry in cell_texts.
struct GroundTruthTable {
  std::string table_id;
  CellGrid grid;
  std::map<CellId, std::string> cell_texts;
  std::map<CellId, Rect> cell_boxes;
  std::vector<WordBox> word_boxes;
  std::map<WordId, CellId> word_cells;

  bool has_words() const { return !word_boxes.empty(); }
  TableStructure structure() const { return {grid, cell_texts, cell_boxes}; }

  // Throws StructureError when a text or word assignment names a cell that
  // is not in the grid.
  void validate() const;
};

// One line of the public PubTabNet JSONL annotations. An optional "words"
// array of {"bbox": [4 numbers], "text": string|null, "cell": int} supplies
// word boxes with their cell assignment.
GroundTruthTable parse_pubtabnet_record(std::string_view record);
std::vector<GroundTruthTable> load_pubtabnet_file(const std::filesystem::path& path);

// Serializes back to the PubTabNet schema, including the "words" extension.
std::string to_pubtabnet_record(const GroundTruthTable& table);

// ICDAR-2013 structure XML. parse_icdar_table returns the first table of
// the document.
GroundTruthTable parse_icdar_table(std::string_view xml);
std::vector<GroundTruthTable> parse_icdar_document(std::string_view xml, const std::string& doc_id = "");

// JSON-lines detections: {"id": int, "bbox": [x_min, y_min, x_max, y_max],
// "text": string|null}. Returned boxes get fresh ids 0, 1, ... in file order.
std::vector<WordBox> parse_word_detections(std::istream& in);
std::vector<WordBox> load_word_detections(const std::filesystem::path& path);
std::string to_detection_lines(std::span<const WordBox> words);

// Maximal-overlap word -> cell assignment; ties go to the smaller cell box.
// Words overlapping no cell box are left unassigned.
std::map<WordId, CellId> assign_words_by_overlap(const GroundTruthTable& truth,
                                                 std::span<const WordBox> words);

// One word per non-blank cell with a box, carrying the cell text.
void words_from_cell_boxes(GroundTruthTable& truth);

}  // namespace tsr
