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


#include "phonosynth/metrics.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace phonosynth {

namespace {

using Gram = std::vector<std::string>;

std::map<Gram, std::size_t> ngrams(const Word& w, std::size_t n) {
  std::map<Gram, std::size_t> out;
  if (w.size() < n) return out;
  for (std::size_t i = 0; i + n <= w.size(); ++i) {
    Gram g;
    for (std::size_t k = 0; k < n; ++k) g.push_back(w[i + k].symbol);
    ++out[g];
  }
  return out;
}

}  // namespace

double chrf(const Word& pred, const Word& gold, std::size_t max_n, double beta) {
  if (gold.empty()) throw std::invalid_argument("chrf needs a non-empty gold word");
  if (max_n == 0) throw std::invalid_argument("chrf needs max_n >= 1");
  double precision = 0.0;
  double recall = 0.0;
  std::size_t orders = 0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    auto ref = ngrams(gold, n);
    if (ref.empty()) continue;
    auto hyp = ngrams(pred, n);
    std::size_t ref_total = 0;
    std::size_t hyp_total = 0;
    std::size_t overlap = 0;
    for (const auto& [g, c] : ref) ref_total += c;
    for (const auto& [g, c] : hyp) {
      hyp_total += c;
      auto it = ref.find(g);
      if (it != ref.end()) overlap += std::min(c, it->second);
    }
    ++orders;
    recall += static_cast<double>(overlap) / static_cast<double>(ref_total);
    if (hyp_total > 0) precision += static_cast<double>(overlap) / static_cast<double>(hyp_total);
  }
  precision /= static_cast<double>(orders);
  recall /= static_cast<double>(orders);
  if (precision == 0.0 && recall == 0.0) return 0.0;
  double b2 = beta * beta;
  return (1.0 + b2) * precision * recall / (b2 * precision + recall);
}

double exact_score(const std::vector<bool>& correct) {
  if (correct.empty()) return 0.0;
  auto hits = std::count(correct.begin(), correct.end(), true);
  return static_cast<double>(hits) / static_cast<double>(correct.size());
}

}  // namespace phonosynth
