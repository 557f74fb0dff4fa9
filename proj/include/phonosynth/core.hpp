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

// Tokens, words, feature tables and Olympiad problem matrices.

#ifndef PHONOSYNTH_CORE_HPP_
#define PHONOSYNTH_CORE_HPP_

#include <compare>
#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace phonosynth {

using FeatureMap = std::map<std::string, bool>;

/// Marks the transformation that produced a token, e.g. {ReplaceBy, h}.
struct TransformationTag {
  std::string op;
  std::optional<std::string> payload;

  auto operator<=>(const TransformationTag&) const = default;
  bool operator==(const TransformationTag&) const = default;

  /// "{ReplaceBy, h}" or "{Identity}".
  std::string to_string() const;
  /// Inverse of to_string; throws std::invalid_argument on malformed text.
  static TransformationTag parse(std::string_view text);
};

struct Token {
  std::string symbol;
  FeatureMap features;
  std::set<TransformationTag> tags;

  /// Absent features read as false.
  bool has_feature(const std::string& name) const;
  bool has_tag(const TransformationTag& tag) const { return tags.count(tag) > 0; }

  bool operator==(const Token&) const = default;
};

struct Word {
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  const Token& operator[](std::size_t i) const { return tokens[i]; }
  Token& operator[](std::size_t i) { return tokens[i]; }

  std::vector<std::string> symbols() const;
  /// Symbols joined by single spaces.
  std::string to_string() const;
  /// Drops every tag, leaving symbols and features.
  Word untagged() const;

  bool operator==(const Word&) const = default;
};

/// True when both words spell the same symbol sequence (features and tags ignored).
bool same_symbols(const Word& a, const Word& b);

// Ingestion errors. All derive from IngestError so the CLI can map them to
// a single exit status.
class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public IngestError {
 public:
  ParseError(std::string field, const std::string& what)
      : IngestError("parse error in field '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class StructureError : public IngestError {
 public:
  using IngestError::IngestError;
};

class UnknownSymbolError : public IngestError {
 public:
  explicit UnknownSymbolError(std::vector<std::string> symbols);
  const std::vector<std::string>& symbols() const { return symbols_; }

 private:
  std::vector<std::string> symbols_;
};

/// Symbol -> feature map. Lookups of symbols the table does not know return
/// an empty map and are remembered so callers can report them once.
class FeatureTable {
 public:
  FeatureTable() = default;
  explicit FeatureTable(std::map<std::string, FeatureMap> entries) : entries_(std::move(entries)) {}
  FeatureTable(const FeatureTable& other);
  FeatureTable& operator=(const FeatureTable& other);

  bool contains(const std::string& symbol) const { return entries_.count(symbol) > 0; }
  const FeatureMap& features_for(const std::string& symbol) const;
  void set(const std::string& symbol, FeatureMap features) { entries_[symbol] = std::move(features); }

  const std::map<std::string, FeatureMap>& entries() const { return entries_; }
  /// Every feature name used by any entry, sorted.
  std::vector<std::string> feature_names() const;
  /// Symbols requested through features_for() that had no entry.
  std::vector<std::string> missing_lookups() const;

  /// Token for `symbol` with its features filled in from the table.
  Token make_token(const std::string& symbol) const;

  bool operator==(const FeatureTable& other) const { return entries_ == other.entries_; }

 private:
  std::map<std::string, FeatureMap> entries_;
  mutable std::mutex missing_mu_;
  mutable std::set<std::string> missing_;
};

/// Splits a space-delimited cell into tokens. Throws UnknownSymbolError for
/// symbols the table lacks and ParseError("cell", ...) for stray separators.
Word tokenize(std::string_view raw, const FeatureTable& table);

enum class Category { kMorphophonology, kMultilingual, kTransliteration, kStress };

std::string to_string(Category c);
Category category_from_string(std::string_view s);

using Cell = std::optional<Word>;

struct TestCell {
  std::size_t row = 0;
  std::size_t col = 0;
  Word gold;
};

/// An Olympiad problem. `matrix` is the training view: test cells are
/// always empty there, their answers live only in `test_cells`.
struct Problem {
  std::string id;
  std::vector<std::string> languages;
  std::vector<std::string> families;
  Category category = Category::kMorphophonology;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> matrix;
  std::vector<TestCell> test_cells;
  FeatureTable feature_table;
  std::string notes;

  std::size_t rows() const { return matrix.size(); }
  std::size_t cols() const { return columns.size(); }
  bool is_test_cell(std::size_t row, std::size_t col) const;
  const Cell& cell(std::size_t row, std::size_t col) const { return matrix[row][col]; }

  bool operator==(const Problem& other) const;
};

/// Reads the JSON problem format (see README).
Problem parse_problem(std::string_view document);
Problem load_problem(const std::string& path);
/// Writes the JSON problem format; parse_problem(serialize_problem(p)) == p.
std::string serialize_problem(const Problem& problem);

/// One ordered column pair (source -> target) and the rows usable for training.
struct ColumnPairTask {
  std::size_t source = 0;
  std::size_t target = 0;
  std::vector<std::size_t> rows;

  bool usable() const { return !rows.empty(); }
  bool operator==(const ColumnPairTask&) const = default;
};

std::vector<ColumnPairTask> column_pair_tasks(const Problem& problem);

}  // namespace phonosynth

#endif  // PHONOSYNTH_CORE_HPP_
