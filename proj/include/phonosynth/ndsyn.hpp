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


// Rule selection by greedy set cover, and the multi-pass learning loop.

#ifndef PHONOSYNTH_NDSYN_HPP_
#define PHONOSYNTH_NDSYN_HPP_

#include <cstddef>
#include <set>
#include <span>
#include <vector>

#include "phonosynth/align.hpp"
#include "phonosynth/core.hpp"
#include "phonosynth/dsl.hpp"
#include "phonosynth/synth.hpp"

namespace phonosynth {

/// How one rule, on its own, fares on each example. The three sets
/// partition the example ids.
struct CoverageRecord {
  ScoredRule rule;
  std::set<std::size_t> correct;
  std::set<std::size_t> incorrect;
  std::set<std::size_t> abstained;
};

CoverageRecord coverage(const ScoredRule& rule, std::span<const TokenExample> examples, const FeatureTable& table);

struct SelectOptions {
  /// Count an example nobody handles as correct when it expects its own
  /// token back (later passes copy untouched tokens through).
  bool default_credit = false;
};

struct Selection {
  RuleList rules;
  /// Coverage of each selected rule, in the order of `rules`.
  std::vector<CoverageRecord> coverage;
};

/// Greedy cover. The cascade order is (rank desc, text asc); a candidate's
/// gain counts the examples whose outcome it would take over. Stops when no
/// candidate has a positive gain.
Selection select_rules_detailed(std::span<const ScoredRule> candidates, std::span<const TokenExample> examples,
                                const FeatureTable& table, const SelectOptions& options = {});

RuleList select_rules(std::span<const ScoredRule> candidates, std::span<const TokenExample> examples,
                      const FeatureTable& table, const SelectOptions& options = {});

struct PassOptions {
  std::size_t pass_index = 0;
  bool default_credit = false;
};

struct PassTrace {
  std::size_t pass_index = 0;
  std::vector<std::size_t> sampled;
  std::size_t candidate_count = 0;
  std::vector<CoverageRecord> selected;
};

struct PassResult {
  RuleList rules;
  /// Examples whose realized output under `rules` is exactly the expected one.
  std::set<std::size_t> solved;
  std::set<std::size_t> unsolved;
  PassTrace trace;
};

/// Throws std::invalid_argument on an empty example set.
PassResult ndsyn_pass(std::span<const TokenExample> examples, const FeatureTable& table, const SynthConfig& cfg,
                      const PassOptions& options = {});

struct TrainingPair {
  Word source;
  Word target;
};

enum class ExampleMode {
  kAligned,     // align_pair + examples_from_alignment
  kPositional,  // stress marking, equal lengths
};

struct SynthesisResult {
  Program program;
  std::vector<PassTrace> passes;
  /// run_program(program, source) == target, rechecked end to end.
  std::vector<bool> pair_solved;
  double score = 0.0;

  std::size_t solved_count() const;
};

/// Throws std::invalid_argument on an empty pair list.
SynthesisResult synthesize_program(const std::vector<TrainingPair>& pairs, ExampleMode mode,
                                   const FeatureTable& table, const SynthConfig& cfg);

/// Sum of rule ranks over every pass. 0 for the empty program.
double program_score(const Program& p, const SynthConfig& cfg);

}  // namespace phonosynth

#endif  // PHONOSYNTH_NDSYN_HPP_
