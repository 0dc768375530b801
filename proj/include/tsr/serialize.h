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

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsr/cell_grid.h"
#include "tsr/relations.h"

namespace tsr {

// JSON-lines artifacts shared by the stage-wise commands.
//   pairs:  {"table_id", "a", "b", "direction": "left"|"top"}
//   labels: the pair fields plus "label" (wire token) and "confidence"
std::string_view to_string(PairDirection direction);

void write_pairs(std::ostream& out, const std::string& table_id, std::span<const WordPair> pairs);
void write_labels(std::ostream& out, const std::string& table_id, std::span<const LabeledPair> labels);

// Grouped by table id, file order kept within each table. Throws ParseError
// naming the line.
std::map<std::string, std::vector<WordPair>> read_pairs(std::istream& in);
std::map<std::string, std::vector<LabeledPair>> read_labels(std::istream& in);

// {"table_id", "rows", "cols", "cells": [{"id", "row", "col", "row_span",
//  "col_span", "text", "bbox"}]}
std::string structure_to_json(const std::string& table_id, const TableStructure& structure, int indent = 2);
TableStructure structure_from_json(std::string_view json, std::string* table_id = nullptr);

}  // namespace tsr
