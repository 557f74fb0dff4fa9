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

// Word pairs to token-level examples.

#ifndef PHONOSYNTH_ALIGN_HPP_
#define PHONOSYNTH_ALIGN_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phonosynth/core.hpp"

namespace phonosynth {

struct AlignParams {
  double match = 2.0;
  double mismatch = -1.0;
  double gap = -1.0;
};

/// One alignment column. A missing index is a gap on that side.
struct AlignOp {
  std::optional<std::size_t> source;
  std::optional<std::size_t> target;
  bool operator==(const AlignOp&) const = default;
};

struct Alignment {
  std::vector<AlignOp> ops;
  double score = 0.0;
  bool operator==(const Alignment&) const = default;

  std::size_t gap_openings() const;
};

/// Sum of the per-column scores of `ops` under `params`.
double alignment_score(const Word& src, const Word& tgt, const std::vector<AlignOp>& ops,
                       const AlignParams& params);

/// Global alignment with local-alignment style scoring (symbol equality is a
/// match). Among optimal alignments, fewer gap openings win, then gaps placed
/// as far right as possible. Throws std::invalid_argument on an empty word.
Alignment align_pair(const Word& src, const Word& tgt, const AlignParams& params = {});

/// One source token in context and the target tokens it must become.
struct TokenExample {
  Word word;
  std::size_t pos = 0;
  std::vector<Token> expected;

  const Token& token() const { return word[pos]; }
  std::vector<std::string> expected_symbols() const;
};

/// Matched and mismatched columns emit the target token; a source token
/// aligned to a gap expects nothing. Unaligned target tokens ride on the
/// nearest preceding source position, or on the first one (before its own
/// emission) when they start the word.
std::vector<TokenExample> examples_from_alignment(const Word& src, const Word& tgt, const Alignment& a);

/// Source symbol -> its most frequently aligned target symbol, ties broken
/// lexicographically. Symbols never aligned to a token map to themselves.
std::map<std::string, std::string> build_translit_map(const std::vector<std::pair<Word, Word>>& pairs,
                                                      const AlignParams& params = {});

Word apply_translit_map(const Word& w, const std::map<std::string, std::string>& map, const FeatureTable& table);

/// Matrix with column `source` rewritten through the map learned from the
/// training rows of (source, target). Other columns are untouched.
struct PremappedMatrix {
  std::vector<std::vector<Cell>> matrix;
  std::map<std::string, std::string> map;
};

PremappedMatrix premap_matrix(const Problem& problem, std::size_t source, std::size_t target,
                              const AlignParams& params = {});

/// Position-wise examples for already aligned pairs (stress marking).
/// Throws std::invalid_argument when the lengths differ.
std::vector<TokenExample> stress_examples(const Word& src, const Word& stress);

/// Human-readable alignment, one column per line ("src<TAB>tgt", gaps shown as a long dash).
std::string format_alignment(const Word& src, const Word& tgt, const Alignment& a);

}  // namespace phonosynth

#endif  // PHONOSYNTH_ALIGN_HPP_
