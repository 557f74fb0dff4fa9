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


// Solving whole problems: per column pair training, test-cell prediction
// and the aggregated report.

#ifndef PHONOSYNTH_HARNESS_HPP_
#define PHONOSYNTH_HARNESS_HPP_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phonosynth/core.hpp"
#include "phonosynth/ndsyn.hpp"
#include "phonosynth/synth.hpp"

namespace phonosynth {

struct SolveOptions {
  /// Train only the column pairs some test cell can use.
  bool lazy = false;
  /// Train column pairs on worker threads.
  bool parallel = true;
  bool trace_passes = false;
  bool dump_alignments = false;
};

/// The learned program for one ordered column pair.
struct PairProgram {
  std::size_t source = 0;
  std::size_t target = 0;
  std::vector<std::size_t> rows;
  ExampleMode mode = ExampleMode::kAligned;
  /// Source-symbol premap, transliteration problems only.
  std::map<std::string, std::string> premap;
  SynthesisResult result;
};

struct CellPrediction {
  std::size_t row = 0;
  std::size_t col = 0;
  Word predicted;
  Word gold;
  std::optional<std::size_t> source;
  std::string program;
  bool correct = false;
  /// Set when no column could serve as a source.
  bool no_source = false;
  std::optional<double> chrf;
};

struct ProblemReport {
  std::string id;
  Category category = Category::kMorphophonology;
  std::vector<std::string> columns;
  std::vector<PairProgram> programs;
  std::vector<CellPrediction> cells;
  double exact = 0.0;
  /// Absent for stress problems.
  std::optional<double> chrf;
  /// Pass traces and alignment dumps when requested.
  std::string diagnostics;

  double mean_rules_per_pair() const;
};

struct Aggregate {
  std::size_t problems = 0;
  double exact = 0.0;
  std::optional<double> chrf;
};

struct PredictionReport {
  std::string variant;
  SynthConfig config;
  std::vector<ProblemReport> problems;  // sorted by id
  std::map<std::string, Aggregate> by_category;
  Aggregate overall;
};

ProblemReport solve_problem(const Problem& problem, const SynthConfig& cfg, const SolveOptions& options = {});

/// Orders problems by id and fills the per-category and overall means.
/// Stress problems do not contribute to any chrF mean.
PredictionReport build_report(std::vector<ProblemReport> problems, const SynthConfig& cfg);

/// Checks report-level invariants (metric ranges, cell accounting); throws
/// std::logic_error on a violation.
void check_report(const PredictionReport& report);

std::string report_to_json(const PredictionReport& report);

/// "solve" subcommand. Returns 0 on success, 1 on ingestion errors and bad
/// arguments, 2 on invariant violations.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phonosynth

#endif  // PHONOSYNTH_HARNESS_HPP_
