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

// The rewrite-rule language.
//
// A Program is a sequence of passes. Each pass maps a first-match cascade of
// Rules over every token of the word:
//
//   output      := Map(disjunction, input_tokens)
//   disjunction := Else(rule, disjunction) | rule
//   rule        := transformation | IfThen(predicate, rule)
//
// Every position of a pass is evaluated against the word as it was when the
// pass started. Deletions and insertions are materialized once all positions
// are done. Tokens written by a rule carry a tag naming the transformation;
// tags survive exactly one pass boundary.

#ifndef PHONOSYNTH_DSL_HPP_
#define PHONOSYNTH_DSL_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "phonosynth/core.hpp"

namespace phonosynth {

// ---------------------------------------------------------------------------
// Predicates

struct IsToken {
  std::string symbol;
  int offset = 0;
  bool operator==(const IsToken&) const = default;
};

/// Is(w, feature, offset): the token at `offset` has `feature` set.
struct HasFeature {
  std::string feature;
  int offset = 0;
  bool operator==(const HasFeature&) const = default;
};

struct TransformationApplied {
  TransformationTag tag;
  int offset = 0;
  bool operator==(const TransformationApplied&) const = default;
};

using PredicateAtom = std::variant<IsToken, HasFeature, TransformationApplied>;

/// An atom, optionally wrapped in a single Not. Double negation is not
/// representable.
struct Predicate {
  PredicateAtom atom;
  bool negated = false;

  int offset() const;
  bool operator==(const Predicate&) const = default;
};

Predicate Not(Predicate p);

// ---------------------------------------------------------------------------
// Transformations

struct ReplaceBy {
  std::string from;
  std::string to;
  bool operator==(const ReplaceBy&) const = default;
};
struct ReplaceAnyBy {
  std::string to;
  bool operator==(const ReplaceAnyBy&) const = default;
};
struct Insert {
  std::vector<std::string> symbols;  // non-empty
  bool operator==(const Insert&) const = default;
};
struct Delete {
  bool operator==(const Delete&) const = default;
};
struct CopyReplace {
  int offset = 1;  // non-zero
  bool operator==(const CopyReplace&) const = default;
};
struct CopyInsert {
  int offset = 1;  // non-zero
  bool operator==(const CopyInsert&) const = default;
};
struct Identity {
  bool operator==(const Identity&) const = default;
};

using Transformation = std::variant<ReplaceBy, ReplaceAnyBy, Insert, Delete, CopyReplace, CopyInsert, Identity>;

/// Constructor name as it appears in program text ("ReplaceBy", ...).
std::string op_name(const Transformation& t);

// ---------------------------------------------------------------------------
// Rules and programs

/// IfThen(g0, IfThen(g1, ... action)). Empty guards always fire.
struct Rule {
  std::vector<Predicate> guards;
  Transformation action;
  bool operator==(const Rule&) const = default;
};

/// Ordered disjunction; the first rule whose guards hold (and whose action
/// applies) wins.
using RuleList = std::vector<Rule>;

struct Program {
  std::vector<RuleList> passes;
  std::size_t rule_count() const;
  bool operator==(const Program&) const = default;
};

// ---------------------------------------------------------------------------
// Semantics

/// Out-of-range offsets read as false before negation.
bool eval_predicate(const Predicate& p, const Word& w, std::size_t pos);

struct TokenOutcome {
  std::vector<Token> emitted;
  std::vector<Token> inserted_after;
  TransformationTag tag;

  /// emitted followed by inserted_after, symbols only.
  std::vector<std::string> realized_symbols() const;
};

/// Returns nullopt when the transformation does not apply at `pos`
/// (ReplaceBy on a different symbol, Copy offset outside the word).
std::optional<TokenOutcome> apply_transformation(const Transformation& t, const Word& w, std::size_t pos,
                                                 const FeatureTable& table);

/// Guards, then action. nullopt means the rule abstains at `pos`.
std::optional<TokenOutcome> apply_rule(const Rule& rule, const Word& w, std::size_t pos, const FeatureTable& table);

/// Index of the rule that handles `pos`, or nullopt if none does.
std::optional<std::size_t> first_match(const RuleList& rules, const Word& w, std::size_t pos,
                                       const FeatureTable& table);

/// One Map over the word. Passed-through tokens come out untagged.
Word run_pass(const RuleList& rules, const Word& w, const FeatureTable& table);

/// Folds run_pass over the passes. Input tags are cleared first and the
/// result carries no tags.
Word run_program(const Program& p, const Word& w, const FeatureTable& table);

// ---------------------------------------------------------------------------
// Surface syntax

std::string to_text(const Predicate& p);
std::string to_text(const Transformation& t);
std::string to_text(const Rule& r);
std::string to_text(const RuleList& rules);
/// One "Map(..., input_tokens)" block per pass, separated by newlines.
std::string pretty_print(const Program& p);

class ProgramSyntaxError : public std::runtime_error {
 public:
  ProgramSyntaxError(std::size_t offset, const std::string& what)
      : std::runtime_error("program text, offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

Program parse_program(std::string_view text);
Rule parse_rule(std::string_view text);

}  // namespace phonosynth

#endif  // PHONOSYNTH_DSL_HPP_
