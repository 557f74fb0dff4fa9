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

// Deductive synthesis of single rules from token examples.
//
// Candidate actions come from inverting each transformation against one
// sampled example. Guards are then grown one predicate at a time: each step
// asks which predicates hold on the examples the action gets right and fail
// on the ones it corrupts, and conjoins the best-ranked answers.

#ifndef PHONOSYNTH_SYNTH_HPP_
#define PHONOSYNTH_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "phonosynth/align.hpp"
#include "phonosynth/core.hpp"
#include "phonosynth/dsl.hpp"

namespace phonosynth {

enum class Variant { kNoFeature, kToken, kFeature };

std::string to_string(Variant v);
Variant variant_from_string(std::string_view s);

struct SynthConfig {
  Variant variant = Variant::kFeature;
  /// Keyed by constructor name ("IsToken", "Is", "IfThen", "ReplaceBy", ...).
  /// Missing entries score 0.
  std::map<std::string, double> op_scores;
  double offset_penalty = 0.5;
  double constant_penalty = 0.1;
  double length_penalty = 0.5;
  int window_left = 3;
  int window_right = 3;
  std::size_t top_k = 10;
  std::size_t max_passes = 5;
  std::uint64_t seed = 0;
  std::size_t samples_per_iteration = 20;
  /// Guards per rule; also capped by the window width.
  std::size_t max_guard_depth = 3;
  /// Predicates kept per guard-growth step; 0 keeps all of them.
  std::size_t guard_beam = 4;
  AlignParams align;

  /// Defaults with the operator scores of `v` filled in.
  static SynthConfig for_variant(Variant v);
  double op_score(const std::string& op) const;
  std::size_t guard_depth_limit() const;
  /// Throws std::invalid_argument on out-of-range settings.
  void validate() const;
};

struct ScoredRule {
  Rule rule;
  double score = 0.0;
};

/// Additive score over the rule's syntax tree: each constructor contributes
/// its operator score, every node (constants and offsets included) pays the
/// length penalty, constants pay the constant penalty and offsets pay
/// offset_penalty * |offset|.
double rank(const Rule& rule, const SynthConfig& cfg);
double rank(const Predicate& guard, const SynthConfig& cfg);

/// Outputs that count as progress at this example: the expected sequence,
/// plus, when no single transformation can produce it (several tokens that
/// do not start with the input token), the first or last expected token on
/// its own. The remainder is then learned in a later pass.
std::vector<std::vector<std::string>> acceptable_outputs(const TokenExample& e);

enum class Verdict { kAbstain, kCorrect, kIncorrect };

Verdict judge(const Rule& rule, const TokenExample& e, const FeatureTable& table);

/// Required outputs per example; an example is satisfied by any of its
/// acceptable outputs.
struct OutputConstraint {
  const TokenExample* example = nullptr;
  std::vector<std::vector<std::string>> acceptable;
};
using TransformationSpec = std::vector<OutputConstraint>;

/// Every transformation consistent with all constraints, in structural order.
std::vector<Transformation> witness_transformation(const TransformationSpec& spec, const SynthConfig& cfg);

/// The finite alphabet predicates range over.
struct PredicateUniverse {
  std::vector<std::string> symbols;
  std::vector<std::string> features;
  std::vector<TransformationTag> tags;

  static PredicateUniverse from_examples(std::span<const TokenExample> examples, const FeatureTable& table,
                                         const SynthConfig& cfg);
  /// All atoms and their negations within the configured window.
  std::vector<Predicate> predicates(const SynthConfig& cfg) const;
};

struct PredicateSpec {
  std::vector<const TokenExample*> positives;
  std::vector<const TokenExample*> negatives;
};

/// Predicates true on every positive and false on every negative, ordered by
/// descending rank. `Is` is never proposed under the NoFeature variant.
std::vector<Predicate> witness_predicate(const PredicateSpec& spec, const PredicateUniverse& universe,
                                         const SynthConfig& cfg);

/// Precomputed predicate truth tables over one pass's examples.
class ExampleIndex {
 public:
  ExampleIndex(std::span<const TokenExample> examples, const FeatureTable& table, const SynthConfig& cfg);
  ~ExampleIndex();
  ExampleIndex(const ExampleIndex&) = delete;
  ExampleIndex& operator=(const ExampleIndex&) = delete;

  std::span<const TokenExample> examples() const { return examples_; }
  const FeatureTable& table() const { return *table_; }
  const PredicateUniverse& universe() const { return universe_; }

  struct Impl;
  const Impl& impl() const { return *impl_; }

 private:
  std::span<const TokenExample> examples_;
  const FeatureTable* table_;
  PredicateUniverse universe_;
  std::unique_ptr<Impl> impl_;
};

/// Rules that produce an acceptable output at examples()[sampled], best
/// first: rules that corrupt no example come before those that stopped at
/// the depth limit, then descending rank. At most cfg.top_k are returned.
std::vector<ScoredRule> synthesize_rules(std::size_t sampled, const ExampleIndex& index, const SynthConfig& cfg);

std::vector<ScoredRule> synthesize_rules(const TokenExample& example, std::span<const TokenExample> all_examples,
                                         const FeatureTable& table, const SynthConfig& cfg);

}  // namespace phonosynth

#endif  // PHONOSYNTH_SYNTH_HPP_
