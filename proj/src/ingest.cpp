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

#include "tsr/ingest.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "json.hpp"
#include "tsr/errors.h"
#include "tsr/html.h"

namespace tsr {
namespace {

using nlohmann::json;

std::string collapse(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      pending = !out.empty();
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    out += ch;
  }
  return out;
}

bool is_markup_token(const std::string& tok) {
  return tok.size() > 2 && tok.front() == '<' && tok.back() == '>';
}

Rect parse_bbox(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 4) throw ParseError(field + " must be an array of 4 numbers");
  double c[4];
  for (int k = 0; k < 4; ++k) {
    if (!v[k].is_number()) throw ParseError(field + " must be an array of 4 numbers");
    c[k] = v[k].get<double>();
  }
  return {c[0], c[1], c[2], c[3]};
}

std::vector<std::string> utf8_chars(std::string_view s) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < s.size();) {
    const auto lead = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    if (lead >= 0xF0) {
      len = 4;
    } else if (lead >= 0xE0) {
      len = 3;
    } else if (lead >= 0xC0) {
      len = 2;
    }
    len = std::min(len, s.size() - i);
    out.emplace_back(s.substr(i, len));
    i += len;
  }
  return out;
}

}  // namespace

void GroundTruthTable::validate() const {
  const auto ids = grid.cell_ids();
  auto present = [&](CellId id) { return std::binary_search(ids.begin(), ids.end(), id); };
  for (const auto& [id, text] : cell_texts) {
    if (!present(id)) throw StructureError("text for cell " + std::to_string(id) + " not in grid");
  }
  for (const auto& [word, cell] : word_cells) {
    if (!present(cell)) {
      throw StructureError("word " + std::to_string(word) + " assigned to missing cell " +
                           std::to_string(cell));
    }
  }
}

GroundTruthTable parse_pubtabnet_record(std::string_view record) {
  json j;
  try {
    j = json::parse(record);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("record is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("record must be a JSON object");

  GroundTruthTable table;
  if (auto it = j.find("filename"); it != j.end() && it->is_string()) {
    table.table_id = std::filesystem::path(it->get<std::string>()).stem().string();
  } else if (auto id = j.find("imgid"); id != j.end() && id->is_number_integer()) {
    table.table_id = std::to_string(id->get<long long>());
  }

  auto html_it = j.find("html");
  if (html_it == j.end() || !html_it->is_object()) throw ParseError("missing field html");
  const json& html = *html_it;
  auto structure_it = html.find("structure");
  if (structure_it == html.end() || !structure_it->is_object()) {
    throw ParseError("missing field html.structure");
  }
  auto tokens_it = structure_it->find("tokens");
  if (tokens_it == structure_it->end() || !tokens_it->is_array()) {
    throw ParseError("missing field html.structure.tokens");
  }
  std::string markup = "<table>";
  for (const auto& tok : *tokens_it) {
    if (!tok.is_string()) throw ParseError("html.structure.tokens must hold strings");
    markup += tok.get<std::string>();
  }
  markup += "</table>";

  auto cells_it = html.find("cells");
  if (cells_it == html.end() || !cells_it->is_array()) throw ParseError("missing field html.cells");
  const json& cells = *cells_it;
  if (cells.empty()) throw StructureError("record has zero cells");

  HtmlTable parsed = parse_html(markup);
  const std::size_t n_td = parsed.texts.size();
  if (n_td != cells.size()) {
    throw StructureError("structure has " + std::to_string(n_td) + " cells but html.cells has " +
                         std::to_string(cells.size()));
  }

  std::vector<bool> blank(cells.size(), false);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string field = "html.cells[" + std::to_string(i) + "]";
    const json& cell = cells[i];
    if (!cell.is_object()) throw ParseError(field + " must be an object");
    auto ct = cell.find("tokens");
    if (ct == cell.end() || !ct->is_array()) throw ParseError("missing field " + field + ".tokens");
    std::string text;
    for (const auto& tok : *ct) {
      if (!tok.is_string()) throw ParseError(field + ".tokens must hold strings");
      const std::string s = tok.get<std::string>();
      if (!is_markup_token(s)) text += s;
    }
    text = collapse(decode_entities(text));
    const CellId id = static_cast<CellId>(i);
    if (text.empty()) {
      blank[i] = true;
      continue;
    }
    table.cell_texts.emplace(id, std::move(text));
    if (auto bb = cell.find("bbox"); bb != cell.end()) {
      table.cell_boxes.emplace(id, parse_bbox(*bb, field + ".bbox"));
    }
  }

  table.grid = parsed.grid;
  for (int r = 0; r < table.grid.rows(); ++r) {
    for (int c = 0; c < table.grid.cols(); ++c) {
      const CellId id = table.grid.at(r, c);
      if (id != kBlank && blank[static_cast<std::size_t>(id)]) table.grid.set(r, c, kBlank);
    }
  }

  if (auto words = j.find("words"); words != j.end()) {
    if (!words->is_array()) throw ParseError("words must be an array");
    for (std::size_t i = 0; i < words->size(); ++i) {
      const std::string field = "words[" + std::to_string(i) + "]";
      const json& w = (*words)[i];
      if (!w.is_object()) throw ParseError(field + " must be an object");
      auto bb = w.find("bbox");
      if (bb == w.end()) throw ParseError("missing field " + field + ".bbox");
      WordBox box{static_cast<WordId>(i), parse_bbox(*bb, field + ".bbox"), std::nullopt};
      if (!box.box.valid()) throw ParseError(field + ".bbox is inverted or empty");
      if (auto t = w.find("text"); t != w.end() && t->is_string()) box.text = t->get<std::string>();
      if (auto c = w.find("cell"); c != w.end()) {
        if (!c->is_number_integer()) throw ParseError(field + ".cell must be an integer");
        table.word_cells.emplace(box.id, c->get<CellId>());
      }
      table.word_boxes.push_back(std::move(box));
    }
  }
  table.validate();
  return table;
}

std::vector<GroundTruthTable> load_pubtabnet_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<GroundTruthTable> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_pubtabnet_record(line));
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const StructureError& e) {
      throw StructureError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (out.back().table_id.empty()) out.back().table_id = std::to_string(line_no);
  }
  return out;
}

std::string to_pubtabnet_record(const GroundTruthTable& table) {
  const auto extents = table.grid.extents();
  json tokens = json::array();
  json cells = json::array();
  std::map<CellId, int> td_index;
  tokens.push_back("<tbody>");
  for (int r = 0; r < table.grid.rows(); ++r) {
    tokens.push_back("<tr>");
    for (int c = 0; c < table.grid.cols(); ++c) {
      const CellId id = table.grid.at(r, c);
      if (id == kBlank) {
        tokens.push_back("<td>");
        tokens.push_back("</td>");
        cells.push_back({{"tokens", json::array()}});
        continue;
      }
      const CellExtent& e = extents.at(id);
      if (e.row != r || e.col != c) continue;
      if (e.row_span > 1 || e.col_span > 1) {
        tokens.push_back("<td");
        if (e.row_span > 1) tokens.push_back(" rowspan=\"" + std::to_string(e.row_span) + "\"");
        if (e.col_span > 1) tokens.push_back(" colspan=\"" + std::to_string(e.col_span) + "\"");
        tokens.push_back(">");
      } else {
        tokens.push_back("<td>");
      }
      tokens.push_back("</td>");
      json cell;
      json ctoks = json::array();
      if (auto t = table.cell_texts.find(id); t != table.cell_texts.end()) {
        for (auto& ch : utf8_chars(t->second)) ctoks.push_back(ch);
      }
      cell["tokens"] = ctoks;
      if (auto b = table.cell_boxes.find(id); b != table.cell_boxes.end()) {
        cell["bbox"] = {b->second.x_min, b->second.y_min, b->second.x_max, b->second.y_max};
      }
      td_index[id] = static_cast<int>(cells.size());
      cells.push_back(std::move(cell));
    }
    tokens.push_back("</tr>");
  }
  tokens.push_back("</tbody>");

  json rec;
  rec["filename"] = table.table_id + ".png";
  rec["html"] = {{"structure", {{"tokens", tokens}}}, {"cells", cells}};
  if (table.has_words()) {
    json words = json::array();
    for (const WordBox& w : table.word_boxes) {
      json jw;
      jw["bbox"] = {w.box.x_min, w.box.y_min, w.box.x_max, w.box.y_max};
      jw["text"] = w.text ? json(*w.text) : json(nullptr);
      if (auto it = table.word_cells.find(w.id); it != table.word_cells.end()) {
        jw["cell"] = td_index.at(it->second);
      }
      words.push_back(std::move(jw));
    }
    rec["words"] = std::move(words);
  }
  return rec.dump();
}

namespace {

namespace pt = boost::property_tree;

int int_attr(const pt::ptree& attrs, const std::string& name, const std::string& where) {
  auto v = attrs.get_optional<std::string>(name);
  if (!v) throw ParseError(where + " is missing attribute " + name);
  try {
    std::size_t used = 0;
    const int x = std::stoi(*v, &used);
    if (used != v->size()) throw std::invalid_argument(*v);
    return x;
  } catch (const std::exception&) {
    throw ParseError(where + " attribute " + name + " is not an integer: \"" + *v + "\"");
  }
}

struct IcdarCell {
  CellExtent extent;
  std::string text;
  std::optional<Rect> box;
};

GroundTruthTable build_icdar_table(const pt::ptree& table_node, const std::string& id) {
  std::vector<IcdarCell> cells;
  for (const auto& [region_name, region] : table_node) {
    if (region_name != "region") continue;
    const pt::ptree empty;
    const pt::ptree& rattrs = region.get_child("<xmlattr>", empty);
    const int row_inc = rattrs.get<int>("row-increment", 0);
    const int col_inc = rattrs.get<int>("col-increment", 0);
    for (const auto& [cell_name, cell] : region) {
      if (cell_name != "cell") continue;
      const std::string where = "cell #" + std::to_string(cells.size());
      const pt::ptree& attrs = cell.get_child("<xmlattr>", empty);
      const int r0 = int_attr(attrs, "start-row", where);
      const int c0 = int_attr(attrs, "start-col", where);
      const int r1 = attrs.count("end-row") ? int_attr(attrs, "end-row", where) : r0;
      const int c1 = attrs.count("end-col") ? int_attr(attrs, "end-col", where) : c0;
      if (r0 < 0 || c0 < 0 || r1 < r0 || c1 < c0) {
        throw StructureError(where + " has an invalid row/column range");
      }
      IcdarCell out;
      out.extent = {r0 + row_inc, c0 + col_inc, r1 - r0 + 1, c1 - c0 + 1};
      out.text = collapse(cell.get<std::string>("content", ""));
      if (auto bb = cell.get_child_optional("bounding-box")) {
        const pt::ptree& b = bb->get_child("<xmlattr>", empty);
        const double x1 = b.get<double>("x1", 0), y1 = b.get<double>("y1", 0);
        const double x2 = b.get<double>("x2", 0), y2 = b.get<double>("y2", 0);
        out.box = Rect{std::min(x1, x2), std::min(y1, y2), std::max(x1, x2), std::max(y1, y2)};
      }
      cells.push_back(std::move(out));
    }
  }
  if (cells.empty()) throw StructureError("table " + id + " has no cells");

  int rows = 0, cols = 0;
  for (const auto& c : cells) {
    rows = std::max(rows, c.extent.row_end());
    cols = std::max(cols, c.extent.col_end());
  }
  GroundTruthTable table;
  table.table_id = id;
  table.grid = CellGrid(rows, cols);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    table.grid.place(static_cast<CellId>(i), cells[i].extent);
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const CellId cid = static_cast<CellId>(i);
    const CellExtent& e = cells[i].extent;
    if (cells[i].text.empty()) {
      for (int r = e.row; r < e.row_end(); ++r) {
        for (int c = e.col; c < e.col_end(); ++c) table.grid.set(r, c, kBlank);
      }
      continue;
    }
    table.cell_texts.emplace(cid, cells[i].text);
    if (cells[i].box && cells[i].box->valid()) table.cell_boxes.emplace(cid, *cells[i].box);
  }
  return table;
}

}  // namespace

std::vector<GroundTruthTable> parse_icdar_document(std::string_view xml, const std::string& doc_id) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(std::string("invalid XML: ") + e.what());
  }
  std::vector<GroundTruthTable> out;
  auto add_table = [&](const pt::ptree& node) {
    std::string id = node.get<std::string>("<xmlattr>.id", std::to_string(out.size() + 1));
    if (!doc_id.empty()) id = doc_id + "_" + id;
    out.push_back(build_icdar_table(node, id));
  };
  if (auto doc = tree.get_child_optional("document")) {
    for (const auto& [name, node] : *doc) {
      if (name == "table") add_table(node);
    }
  } else if (auto t = tree.get_child_optional("table")) {
    add_table(*t);
  }
  if (out.empty()) throw StructureError("document contains no table");
  return out;
}

GroundTruthTable parse_icdar_table(std::string_view xml) { return parse_icdar_document(xml).front(); }

std::vector<WordBox> parse_word_detections(std::istream& in) {
  std::vector<WordBox> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "detection " + std::to_string(out.size());
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (!j.is_object()) throw ParseError(where + ": expected a JSON object");
    auto bb = j.find("bbox");
    if (bb == j.end() || !bb->is_array() || bb->size() != 4) {
      throw ValidationError(where + ": bbox must hold 4 coordinates");
    }
    double c[4];
    for (int k = 0; k < 4; ++k) {
      if (!(*bb)[k].is_number()) throw ValidationError(where + ": non-numeric coordinate");
      c[k] = (*bb)[k].get<double>();
    }
    WordBox w{static_cast<WordId>(out.size()), {c[0], c[1], c[2], c[3]}, std::nullopt};
    if (!w.box.valid()) throw ValidationError(where + ": inverted or empty box");
    if (auto t = j.find("text"); t != j.end() && t->is_string()) w.text = t->get<std::string>();
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<WordBox> load_word_detections(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_word_detections(in);
}

std::string to_detection_lines(std::span<const WordBox> words) {
  std::string out;
  for (const WordBox& w : words) {
    json j;
    j["id"] = w.id;
    j["bbox"] = {w.box.x_min, w.box.y_min, w.box.x_max, w.box.y_max};
    j["text"] = w.text ? json(*w.text) : json(nullptr);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::map<WordId, CellId> assign_words_by_overlap(const GroundTruthTable& truth,
                                                 std::span<const WordBox> words) {
  std::map<WordId, CellId> out;
  for (const WordBox& w : words) {
    CellId best = kBlank;
    double best_area = 0;
    double best_cell_area = std::numeric_limits<double>::infinity();
    for (const auto& [cell, box] : truth.cell_boxes) {
      const double a = intersection_area(w.box, box);
      if (a <= 0) continue;
      if (a > best_area || (a == best_area && box.area() < best_cell_area)) {
        best = cell;
        best_area = a;
        best_cell_area = box.area();
      }
    }
    if (best != kBlank) out.emplace(w.id, best);
  }
  return out;
}

void words_from_cell_boxes(GroundTruthTable& truth) {
  truth.word_boxes.clear();
  truth.word_cells.clear();
  for (const auto& [cell, box] : truth.cell_boxes) {
    if (!box.valid()) continue;
    const WordId id = static_cast<WordId>(truth.word_boxes.size());
    std::optional<std::string> text;
    if (auto t = truth.cell_texts.find(cell); t != truth.cell_texts.end()) text = t->second;
    truth.word_boxes.push_back({id, box, text});
    truth.word_cells.emplace(id, cell);
  }
}

}  // namespace tsr
