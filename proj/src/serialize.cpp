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

#include "tsr/serialize.h"

#include <istream>
#include <ostream>

#include "json.hpp"
#include "tsr/errors.h"

namespace tsr {
namespace {

using nlohmann::json;

json pair_json(const std::string& table_id, const WordPair& p) {
  return {{"table_id", table_id}, {"a", p.a}, {"b", p.b}, {"direction", std::string(to_string(p.direction))}};
}

template <typename T>
T field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field " + key);
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(where + ": bad value for " + key);
  }
}

// Calls fn(json, where) for every non-blank line.
template <typename Fn>
void for_each_record(std::istream& in, Fn fn) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(number);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (!j.is_object()) throw ParseError(where + ": expected a JSON object");
    fn(j, where);
  }
}

WordPair parse_pair(const json& j, const std::string& where) {
  WordPair p{field<int>(j, "a", where), field<int>(j, "b", where), PairDirection::kLeft};
  const auto dir = field<std::string>(j, "direction", where);
  if (dir == "top") {
    p.direction = PairDirection::kTop;
  } else if (dir != "left") {
    throw ParseError(where + ": unknown direction \"" + dir + "\"");
  }
  return p;
}

}  // namespace

std::string_view to_string(PairDirection direction) { return direction == PairDirection::kLeft ? "left" : "top"; }

void write_pairs(std::ostream& out, const std::string& table_id, std::span<const WordPair> pairs) {
  for (const WordPair& p : pairs) out << pair_json(table_id, p).dump() << '\n';
}

void write_labels(std::ostream& out, const std::string& table_id, std::span<const LabeledPair> labels) {
  for (const LabeledPair& lp : labels) {
    json j = pair_json(table_id, lp.pair);
    j["label"] = std::string(to_wire(lp.label));
    j["confidence"] = lp.confidence;
    out << j.dump() << '\n';
  }
}

std::map<std::string, std::vector<WordPair>> read_pairs(std::istream& in) {
  std::map<std::string, std::vector<WordPair>> out;
  for_each_record(in, [&](const json& j, const std::string& where) {
    out[field<std::string>(j, "table_id", where)].push_back(parse_pair(j, where));
  });
  return out;
}

std::map<std::string, std::vector<LabeledPair>> read_labels(std::istream& in) {
  std::map<std::string, std::vector<LabeledPair>> out;
  for_each_record(in, [&](const json& j, const std::string& where) {
    LabeledPair lp;
    lp.pair = parse_pair(j, where);
    const auto token = field<std::string>(j, "label", where);
    const auto label = label_from_wire(token);
    if (!label) throw ParseError(where + ": unknown label \"" + token + "\"");
    lp.label = *label;
    lp.confidence = field<double>(j, "confidence", where);
    out[field<std::string>(j, "table_id", where)].push_back(lp);
  });
  return out;
}

std::string structure_to_json(const std::string& table_id, const TableStructure& structure, int indent) {
  json cells = json::array();
  for (const auto& [id, e] : structure.grid.extents()) {
    json c = {{"id", id}, {"row", e.row}, {"col", e.col}, {"row_span", e.row_span}, {"col_span", e.col_span}};
    auto t = structure.texts.find(id);
    c["text"] = t == structure.texts.end() ? "" : t->second;
    if (auto b = structure.boxes.find(id); b != structure.boxes.end()) {
      c["bbox"] = {b->second.x_min, b->second.y_min, b->second.x_max, b->second.y_max};
    }
    cells.push_back(std::move(c));
  }
  json j = {{"table_id", table_id}, {"rows", structure.grid.rows()}, {"cols", structure.grid.cols()}, {"cells", cells}};
  return j.dump(indent);
}

TableStructure structure_from_json(std::string_view text, std::string* table_id) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("structure: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("structure: expected a JSON object");
  const std::string where = "structure";
  if (table_id) *table_id = j.value("table_id", "");
  const int rows = field<int>(j, "rows", where);
  const int cols = field<int>(j, "cols", where);
  if (rows < 0 || cols < 0) throw ValidationError("structure: negative grid size");
  TableStructure s;
  s.grid = CellGrid(rows, cols);
  const auto cells = j.find("cells");
  if (cells == j.end() || !cells->is_array()) throw ParseError("structure: missing field cells");
  for (std::size_t i = 0; i < cells->size(); ++i) {
    const json& c = (*cells)[i];
    const std::string w = "structure: cells[" + std::to_string(i) + "]";
    const CellId id = field<int>(c, "id", w);
    s.grid.place(id, {field<int>(c, "row", w), field<int>(c, "col", w), field<int>(c, "row_span", w),
                      field<int>(c, "col_span", w)});
    s.texts[id] = c.value("text", "");
    if (auto b = c.find("bbox"); b != c.end()) {
      const auto v = b->get<std::vector<double>>();
      if (v.size() != 4) throw ParseError(w + ": bbox must hold 4 numbers");
      s.boxes[id] = {v[0], v[1], v[2], v[3]};
    }
  }
  return s;
}

}  // namespace tsr
