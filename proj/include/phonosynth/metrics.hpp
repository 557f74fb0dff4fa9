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


// Scoring predicted words against gold answers.

#ifndef PHONOSYNTH_METRICS_HPP_
#define PHONOSYNTH_METRICS_HPP_

#include <cstddef>
#include <vector>

#include "phonosynth/core.hpp"

namespace phonosynth {

/// Token-level chrF. Precision and recall are averaged over the n-gram
/// orders 1..max_n for which the gold word has at least one n-gram, with
/// clipped counts, then combined as F_beta. Throws std::invalid_argument on
/// an empty gold word or max_n == 0.
double chrf(const Word& pred, const Word& gold, std::size_t max_n = 3, double beta = 3.0);

/// Fraction of true entries; 0 for an empty span.
double exact_score(const std::vector<bool>& correct);

}  // namespace phonosynth

#endif  // PHONOSYNTH_METRICS_HPP_
