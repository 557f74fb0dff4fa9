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


// Independent reference implementations used to check the library.
// They favour obviousness over speed.

#ifndef PHONOSYNTH_TESTS_ORACLES_HPP_
#define PHONOSYNTH_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "phonosynth/align.hpp"
#include "phonosynth/core.hpp"

namespace phonosynth::oracle {

// ---------------------------------------------------------------------------
// Alignment by complete enumeration

enum class Col { kSourceGap = 0, kTargetGap = 1, kPair = 2 };

struct Enumerated {
  std::vector<Col> cols;
  double score = 0.0;
  std::size_t openings = 0;
};

inline void enumerate_alignments(const Word& s, const Word& t, const AlignParams& p, std::size_t i,
                                 std::size_t j, std::vector<Col>& cols, double score,
                                 std::vector<Enumerated>& out) {
  if (i == s.size() && j == t.size()) {
    std::size_t openings = 0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] != Col::kPair && (k == 0 || cols[k - 1] != cols[k])) ++openings;
    }
    out.push_back(Enumerated{cols, score, openings});
    return;
  }
  if (i < s.size() && j < t.size()) {
    cols.push_back(Col::kPair);
    enumerate_alignments(s, t, p, i + 1, j + 1, cols, score + (s[i].symbol == t[j].symbol ? p.match : p.mismatch),
                         out);
    cols.pop_back();
  }
  if (i < s.size()) {
    cols.push_back(Col::kSourceGap);
    enumerate_alignments(s, t, p, i + 1, j, cols, score + p.gap, out);
    cols.pop_back();
  }
  if (j < t.size()) {
    cols.push_back(Col::kTargetGap);
    enumerate_alignments(s, t, p, i, j + 1, cols, score + p.gap, out);
    cols.pop_back();
  }
}

/// Best alignment by (score, fewest gap openings), then the one whose
/// columns, read from the end, put gaps as late as possible.
inline Enumerated best_alignment(const Word& s, const Word& t, const AlignParams& p = {}) {
  std::vector<Enumerated> all;
  std::vector<Col> cols;
  enumerate_alignments(s, t, p, 0, 0, cols, 0.0, all);
  auto better = [](const Enumerated& a, const Enumerated& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.openings != b.openings) return a.openings < b.openings;
    return std::lexicographical_compare(a.cols.rbegin(), a.cols.rend(), b.cols.rbegin(), b.cols.rend());
  };
  return *std::min_element(all.begin(), all.end(), [&](const auto& a, const auto& b) { return better(a, b); });
}

inline std::vector<Col> columns_of(const Alignment& a) {
  std::vector<Col> out;
  for (const auto& op : a.ops) {
    out.push_back(op.source && op.target ? Col::kPair : (op.source ? Col::kSourceGap : Col::kTargetGap));
  }
  return out;
}

/// Every word over `alphabet` with length in [1, max_len].
inline std::vector<Word> all_words(const std::vector<std::string>& alphabet, std::size_t max_len,
                                   const FeatureTable& table) {
  std::vector<Word> out;
  std::vector<std::string> cur;
  std::function<void()> rec = [&] {
    if (!cur.empty()) {
      std::string joined;
      for (const auto& s : cur) joined += (joined.empty() ? "" : " ") + s;
      out.push_back(tokenize(joined, table));
    }
    if (cur.size() == max_len) return;
    for (const auto& a : alphabet) {
      cur.push_back(a);
      rec();
      cur.pop_back();
    }
  };
  rec();
  return out;
}

// ---------------------------------------------------------------------------
// n-gram counting for chrF

/// chrF from first principles: list every n-gram occurrence, match them
/// greedily one to one, and combine the averaged precision and recall.
inline double chrf(const std::vector<std::string>& pred, const std::vector<std::string>& gold, std::size_t max_n,
                   double beta) {
  double p_sum = 0.0;
  double r_sum = 0.0;
  std::size_t orders = 0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    if (gold.size() < n) continue;
    std::vector<std::vector<std::string>> g;
    std::vector<std::vector<std::string>> h;
    for (std::size_t i = 0; i + n <= gold.size(); ++i) g.emplace_back(gold.begin() + i, gold.begin() + i + n);
    for (std::size_t i = 0; i + n <= pred.size(); ++i) h.emplace_back(pred.begin() + i, pred.begin() + i + n);
    std::vector<bool> used(g.size(), false);
    std::size_t matched = 0;
    for (const auto& gram : h) {
      for (std::size_t k = 0; k < g.size(); ++k) {
        if (!used[k] && g[k] == gram) {
          used[k] = true;
          ++matched;
          break;
        }
      }
    }
    ++orders;
    r_sum += static_cast<double>(matched) / static_cast<double>(g.size());
    p_sum += h.empty() ? 0.0 : static_cast<double>(matched) / static_cast<double>(h.size());
  }
  double p = p_sum / static_cast<double>(orders);
  double r = r_sum / static_cast<double>(orders);
  if (p + r == 0.0) return 0.0;
  return (1 + beta * beta) * p * r / (beta * beta * p + r);
}

}  // namespace phonosynth::oracle

#endif  // PHONOSYNTH_TESTS_ORACLES_HPP_
