// Copyright 2026 The Phonosynth Authors.
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

#include "phonosynth/core.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace phonosynth {

using ordered_json = nlohmann::ordered_json;

std::string TransformationTag::to_string() const {
  if (!payload) return "{" + op + "}";
  return "{" + op + ", " + *payload + "}";
}

TransformationTag TransformationTag::parse(std::string_view text) {
  if (text.size() < 3 || text.front() != '{' || text.back() != '}') {
    throw std::invalid_argument("malformed transformation tag: " + std::string(text));
  }
  std::string_view inner = text.substr(1, text.size() - 2);
  TransformationTag tag;
  auto comma = inner.find(',');
  if (comma == std::string_view::npos) {
    tag.op = std::string(inner);
  } else {
    tag.op = std::string(inner.substr(0, comma));
    std::string_view rest = inner.substr(comma + 1);
    if (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    tag.payload = std::string(rest);
  }
  if (tag.op.empty()) throw std::invalid_argument("transformation tag without operator");
  return tag;
}

bool Token::has_feature(const std::string& name) const {
  auto it = features.find(name);
  return it != features.end() && it->second;
}

std::vector<std::string> Word::symbols() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.symbol);
  return out;
}

std::string Word::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i].symbol;
  }
  return out;
}

Word Word::untagged() const {
  Word out = *this;
  for (auto& t : out.tokens) t.tags.clear();
  return out;
}

bool same_symbols(const Word& a, const Word& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].symbol != b[i].symbol) return false;
  }
  return true;
}

namespace {

std::string join_symbols(const std::vector<std::string>& symbols) {
  std::string out;
  for (const auto& s : symbols) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

bool is_separator(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

}  // namespace

UnknownSymbolError::UnknownSymbolError(std::vector<std::string> symbols)
    : IngestError("symbols missing from feature table: " + join_symbols(symbols)),
      symbols_(std::move(symbols)) {}

FeatureTable::FeatureTable(const FeatureTable& other) : entries_(other.entries_) {}

FeatureTable& FeatureTable::operator=(const FeatureTable& other) {
  if (this != &other) entries_ = other.entries_;
  return *this;
}

const FeatureMap& FeatureTable::features_for(const std::string& symbol) const {
  static const FeatureMap kEmpty;
  auto it = entries_.find(symbol);
  if (it != entries_.end()) return it->second;
  std::lock_guard<std::mutex> lock(missing_mu_);
  missing_.insert(symbol);
  return kEmpty;
}

std::vector<std::string> FeatureTable::feature_names() const {
  std::set<std::string> names;
  for (const auto& [symbol, features] : entries_) {
    for (const auto& [name, value] : features) names.insert(name);
  }
  return {names.begin(), names.end()};
}

std::vector<std::string> FeatureTable::missing_lookups() const {
  std::lock_guard<std::mutex> lock(missing_mu_);
  return {missing_.begin(), missing_.end()};
}

Token FeatureTable::make_token(const std::string& symbol) const {
  return Token{symbol, features_for(symbol), {}};
}

Word tokenize(std::string_view raw, const FeatureTable& table) {
  Word word;
  if (raw.empty()) return word;
  if (is_separator(raw.front()) || is_separator(raw.back())) {
    throw ParseError("cell", "leading or trailing separator in '" + std::string(raw) + "'");
  }
  std::vector<std::string> unknown;
  std::size_t start = 0;
  while (start <= raw.size()) {
    std::size_t end = raw.find(' ', start);
    if (end == std::string_view::npos) end = raw.size();
    std::string symbol(raw.substr(start, end - start));
    if (symbol.empty()) {
      throw ParseError("cell", "consecutive separators in '" + std::string(raw) + "'");
    }
    if (std::any_of(symbol.begin(), symbol.end(), is_separator)) {
      throw ParseError("cell", "tokens must be separated by single spaces in '" + std::string(raw) + "'");
    }
    if (!table.contains(symbol)) {
      if (std::find(unknown.begin(), unknown.end(), symbol) == unknown.end()) unknown.push_back(symbol);
    } else {
      word.tokens.push_back(Token{symbol, table.entries().at(symbol), {}});
    }
    start = end + 1;
  }
  if (!unknown.empty()) throw UnknownSymbolError(std::move(unknown));
  return word;
}

std::string to_string(Category c) {
  switch (c) {
    case Category::kMorphophonology: return "morphophonology";
    case Category::kMultilingual: return "multilingual";
    case Category::kTransliteration: return "transliteration";
    case Category::kStress: return "stress";
  }
  return "morphophonology";
}

Category category_from_string(std::string_view s) {
  if (s == "morphophonology") return Category::kMorphophonology;
  if (s == "multilingual") return Category::kMultilingual;
  if (s == "transliteration") return Category::kTransliteration;
  if (s == "stress") return Category::kStress;
  throw ParseError("category", "unknown category '" + std::string(s) + "'");
}

bool Problem::is_test_cell(std::size_t row, std::size_t col) const {
  return std::any_of(test_cells.begin(), test_cells.end(),
                     [&](const TestCell& t) { return t.row == row && t.col == col; });
}

bool Problem::operator==(const Problem& other) const {
  if (id != other.id || languages != other.languages || families != other.families ||
      category != other.category || columns != other.columns || matrix != other.matrix ||
      !(feature_table == other.feature_table) || notes != other.notes ||
      test_cells.size() != other.test_cells.size()) {
    return false;
  }
  for (std::size_t i = 0; i < test_cells.size(); ++i) {
    const auto& a = test_cells[i];
    const auto& b = other.test_cells[i];
    if (a.row != b.row || a.col != b.col || !(a.gold == b.gold)) return false;
  }
  return true;
}

namespace {

const ordered_json& require(const ordered_json& doc, const char* field) {
  if (!doc.contains(field)) throw ParseError(field, "missing");
  return doc.at(field);
}

std::string require_string(const ordered_json& value, const std::string& field) {
  if (!value.is_string()) throw ParseError(field, "expected a string");
  return value.get<std::string>();
}

std::vector<std::string> require_string_array(const ordered_json& doc, const char* field) {
  const auto& value = require(doc, field);
  if (!value.is_array()) throw ParseError(field, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& v : value) out.push_back(require_string(v, field));
  return out;
}

std::size_t require_index(const ordered_json& value, const std::string& field) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    throw ParseError(field, "expected a non-negative integer");
  }
  return value.get<std::size_t>();
}

}  // namespace

Problem parse_problem(std::string_view document) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("<document>", e.what());
  }
  if (!doc.is_object()) throw ParseError("<document>", "expected a JSON object");

  Problem p;
  p.id = require_string(require(doc, "id"), "id");
  p.languages = require_string_array(doc, "languages");
  p.families = require_string_array(doc, "families");
  p.category = category_from_string(require_string(require(doc, "category"), "category"));
  p.columns = require_string_array(doc, "columns");
  p.notes = doc.contains("notes") ? require_string(doc.at("notes"), "notes") : std::string();

  const auto& features = require(doc, "features");
  if (!features.is_object()) throw ParseError("features", "expected an object");
  std::map<std::string, FeatureMap> entries;
  for (const auto& [symbol, fmap] : features.items()) {
    if (!fmap.is_object()) throw ParseError("features." + symbol, "expected an object");
    FeatureMap m;
    for (const auto& [name, value] : fmap.items()) {
      if (!value.is_boolean()) throw ParseError("features." + symbol + "." + name, "expected a boolean");
      m[name] = value.get<bool>();
    }
    entries[symbol] = std::move(m);
  }
  p.feature_table = FeatureTable(std::move(entries));

  const auto& matrix = require(doc, "matrix");
  if (!matrix.is_array()) throw ParseError("matrix", "expected an array of rows");
  if (matrix.empty()) throw StructureError("matrix is empty");
  if (p.columns.empty()) throw StructureError("problem declares no columns");

  std::vector<std::vector<std::optional<std::string>>> raw(matrix.size());
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    const auto& row = matrix[r];
    std::string field = "matrix[" + std::to_string(r) + "]";
    if (!row.is_array()) throw ParseError(field, "expected an array of cells");
    if (row.size() != p.columns.size()) {
      throw StructureError(field + " has " + std::to_string(row.size()) + " cells, expected " +
                           std::to_string(p.columns.size()));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c].is_null()) {
        raw[r].emplace_back(std::nullopt);
      } else {
        raw[r].emplace_back(require_string(row[c], field + "[" + std::to_string(c) + "]"));
      }
    }
  }

  std::vector<std::tuple<std::size_t, std::size_t, std::string>> raw_tests;
  if (doc.contains("test_cells")) {
    const auto& tests = doc.at("test_cells");
    if (!tests.is_array()) throw ParseError("test_cells", "expected an array");
    for (std::size_t i = 0; i < tests.size(); ++i) {
      std::string field = "test_cells[" + std::to_string(i) + "]";
      const auto& t = tests[i];
      if (!t.is_object()) throw ParseError(field, "expected an object");
      if (!t.contains("row")) throw ParseError(field + ".row", "missing");
      if (!t.contains("col")) throw ParseError(field + ".col", "missing");
      if (!t.contains("gold")) throw ParseError(field + ".gold", "missing");
      raw_tests.emplace_back(require_index(t.at("row"), field + ".row"),
                             require_index(t.at("col"), field + ".col"),
                             require_string(t.at("gold"), field + ".gold"));
    }
  }

  // Every symbol must be declared; collect all offenders before failing.
  std::vector<std::string> unknown;
  auto check_symbols = [&](const std::string& cell) {
    std::istringstream in(cell);
    std::string sym;
    while (in >> sym) {
      if (!p.feature_table.contains(sym) && std::find(unknown.begin(), unknown.end(), sym) == unknown.end()) {
        unknown.push_back(sym);
      }
    }
  };
  for (const auto& row : raw) {
    for (const auto& cell : row) {
      if (cell) check_symbols(*cell);
    }
  }
  for (const auto& [r, c, gold] : raw_tests) check_symbols(gold);
  if (!unknown.empty()) throw UnknownSymbolError(std::move(unknown));

  p.matrix.resize(raw.size());
  for (std::size_t r = 0; r < raw.size(); ++r) {
    for (const auto& cell : raw[r]) {
      if (cell) {
        p.matrix[r].emplace_back(tokenize(*cell, p.feature_table));
      } else {
        p.matrix[r].emplace_back(std::nullopt);
      }
    }
  }

  for (const auto& [r, c, gold] : raw_tests) {
    if (r >= p.rows() || c >= p.cols()) {
      throw StructureError("test cell (" + std::to_string(r) + ", " + std::to_string(c) + ") is outside the matrix");
    }
    if (p.matrix[r][c]) {
      throw StructureError("test cell (" + std::to_string(r) + ", " + std::to_string(c) +
                           ") must be null in the matrix");
    }
    if (p.is_test_cell(r, c)) {
      throw StructureError("duplicate test cell (" + std::to_string(r) + ", " + std::to_string(c) + ")");
    }
    bool has_source = false;
    for (std::size_t k = 0; k < p.cols(); ++k) {
      if (k != c && p.matrix[r][k] && !p.matrix[r][k]->empty()) has_source = true;
    }
    if (!has_source) {
      throw StructureError("test cell (" + std::to_string(r) + ", " + std::to_string(c) +
                           ") has no training cell in its row");
    }
    p.test_cells.push_back(TestCell{r, c, tokenize(gold, p.feature_table)});
  }
  return p;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot read problem file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

std::string serialize_problem(const Problem& problem) {
  ordered_json doc;
  doc["id"] = problem.id;
  doc["languages"] = problem.languages;
  doc["families"] = problem.families;
  doc["category"] = to_string(problem.category);
  doc["columns"] = problem.columns;
  ordered_json matrix = ordered_json::array();
  for (const auto& row : problem.matrix) {
    ordered_json r = ordered_json::array();
    for (const auto& cell : row) {
      if (cell) {
        r.push_back(cell->to_string());
      } else {
        r.push_back(nullptr);
      }
    }
    matrix.push_back(std::move(r));
  }
  doc["matrix"] = std::move(matrix);
  ordered_json tests = ordered_json::array();
  for (const auto& t : problem.test_cells) {
    tests.push_back(ordered_json{{"row", t.row}, {"col", t.col}, {"gold", t.gold.to_string()}});
  }
  doc["test_cells"] = std::move(tests);
  ordered_json features = ordered_json::object();
  for (const auto& [symbol, fmap] : problem.feature_table.entries()) {
    ordered_json f = ordered_json::object();
    for (const auto& [name, value] : fmap) f[name] = value;
    features[symbol] = std::move(f);
  }
  doc["features"] = std::move(features);
  doc["notes"] = problem.notes;
  return doc.dump(2, ' ', false) + "\n";
}

std::vector<ColumnPairTask> column_pair_tasks(const Problem& problem) {
  std::vector<ColumnPairTask> tasks;
  for (std::size_t s = 0; s < problem.cols(); ++s) {
    for (std::size_t t = 0; t < problem.cols(); ++t) {
      if (s == t) continue;
      ColumnPairTask task{s, t, {}};
      for (std::size_t r = 0; r < problem.rows(); ++r) {
        const auto& src = problem.cell(r, s);
        const auto& tgt = problem.cell(r, t);
        if (src && tgt && !src->empty() && !tgt->empty() && !problem.is_test_cell(r, s) &&
            !problem.is_test_cell(r, t)) {
          task.rows.push_back(r);
        }
      }
      tasks.push_back(std::move(task));
    }
  }
  return tasks;
}

}  // namespace phonosynth
