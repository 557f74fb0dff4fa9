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

#include "phonosynth/align.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace phonosynth {

std::size_t Alignment::gap_openings() const {
  std::size_t openings = 0;
  int prev = 0;  // 0 = column, 1 = source-only, 2 = target-only
  for (const auto& op : ops) {
    int kind = op.source && op.target ? 0 : (op.source ? 1 : 2);
    if (kind != 0 && kind != prev) ++openings;
    prev = kind;
  }
  return openings;
}

double alignment_score(const Word& src, const Word& tgt, const std::vector<AlignOp>& ops,
                       const AlignParams& params) {
  double score = 0.0;
  for (const auto& op : ops) {
    if (op.source && op.target) {
      score += src[*op.source].symbol == tgt[*op.target].symbol ? params.match : params.mismatch;
    } else {
      score += params.gap;
    }
  }
  return score;
}

namespace {

// DP states: the kind of the last column.
enum State : int { kDiag = 0, kSourceGap = 1, kTargetGap = 2 };

struct Cellval {
  double score = -std::numeric_limits<double>::infinity();
  int openings = 0;
  bool valid = false;
};

constexpr double kEps = 1e-9;

// -1: a worse, 0: tie, 1: a better.
int compare(const Cellval& a, const Cellval& b) {
  if (!a.valid || !b.valid) return a.valid == b.valid ? 0 : (a.valid ? 1 : -1);
  if (a.score > b.score + kEps) return 1;
  if (b.score > a.score + kEps) return -1;
  if (a.openings != b.openings) return a.openings < b.openings ? 1 : -1;
  return 0;
}

// Gap states first so that, reading from the end, gaps are taken as late as
// possible.
constexpr std::array<int, 3> kPreference = {kSourceGap, kTargetGap, kDiag};

}  // namespace

Alignment align_pair(const Word& src, const Word& tgt, const AlignParams& params) {
  if (src.empty() || tgt.empty()) throw std::invalid_argument("align_pair needs two non-empty words");
  const std::size_t n = src.size();
  const std::size_t m = tgt.size();
  // dp[i][j][state]; state of (0,0) is a virtual column so the first gap opens.
  std::vector<std::vector<std::array<Cellval, 3>>> dp(n + 1, std::vector<std::array<Cellval, 3>>(m + 1));
  dp[0][0][kDiag] = Cellval{0.0, 0, true};

  auto extend = [](const Cellval& prev, double add, int opened) {
    if (!prev.valid) return Cellval{};
    return Cellval{prev.score + add, prev.openings + opened, true};
  };

  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      if (i == 0 && j == 0) continue;
      auto& here = dp[i][j];
      if (i > 0 && j > 0) {
        double sub = src[i - 1].symbol == tgt[j - 1].symbol ? params.match : params.mismatch;
        for (int s : kPreference) {
          Cellval c = extend(dp[i - 1][j - 1][s], sub, 0);
          if (compare(c, here[kDiag]) > 0) here[kDiag] = c;
        }
      }
      if (i > 0) {
        for (int s : kPreference) {
          Cellval c = extend(dp[i - 1][j][s], params.gap, s == kSourceGap ? 0 : 1);
          if (compare(c, here[kSourceGap]) > 0) here[kSourceGap] = c;
        }
      }
      if (j > 0) {
        for (int s : kPreference) {
          Cellval c = extend(dp[i][j - 1][s], params.gap, s == kTargetGap ? 0 : 1);
          if (compare(c, here[kTargetGap]) > 0) here[kTargetGap] = c;
        }
      }
    }
  }

  auto pick = [&](const std::array<Cellval, 3>& cells) {
    int best = -1;
    for (int s : kPreference) {
      if (best < 0 || compare(cells[s], cells[best]) > 0) best = s;
    }
    return best;
  };

  Alignment out;
  std::size_t i = n;
  std::size_t j = m;
  int state = pick(dp[n][m]);
  out.score = dp[n][m][state].score;
  while (i > 0 || j > 0) {
    const Cellval& here = dp[i][j][state];
    int prev_state = -1;
    if (state == kDiag) {
      out.ops.push_back(AlignOp{i - 1, j - 1});
      double sub = src[i - 1].symbol == tgt[j - 1].symbol ? params.match : params.mismatch;
      for (int s : kPreference) {
        if (compare(extend(dp[i - 1][j - 1][s], sub, 0), here) == 0) {
          prev_state = s;
          break;
        }
      }
      --i;
      --j;
    } else if (state == kSourceGap) {
      out.ops.push_back(AlignOp{i - 1, std::nullopt});
      for (int s : kPreference) {
        if (compare(extend(dp[i - 1][j][s], params.gap, s == kSourceGap ? 0 : 1), here) == 0) {
          prev_state = s;
          break;
        }
      }
      --i;
    } else {
      out.ops.push_back(AlignOp{std::nullopt, j - 1});
      for (int s : kPreference) {
        if (compare(extend(dp[i][j - 1][s], params.gap, s == kTargetGap ? 0 : 1), here) == 0) {
          prev_state = s;
          break;
        }
      }
      --j;
    }
    if (prev_state < 0) throw std::logic_error("alignment traceback lost its path");
    state = prev_state;
  }
  std::reverse(out.ops.begin(), out.ops.end());
  return out;
}

std::vector<std::string> TokenExample::expected_symbols() const {
  std::vector<std::string> out;
  out.reserve(expected.size());
  for (const auto& t : expected) out.push_back(t.symbol);
  return out;
}

std::vector<TokenExample> examples_from_alignment(const Word& src, const Word& tgt, const Alignment& a) {
  std::vector<std::vector<Token>> expected(src.size());
  std::vector<Token> leading;
  std::optional<std::size_t> last_source;
  for (const auto& op : a.ops) {
    if (op.source) {
      last_source = op.source;
      if (op.target) expected[*op.source].push_back(tgt[*op.target]);
    } else if (op.target) {
      if (last_source) {
        expected[*last_source].push_back(tgt[*op.target]);
      } else {
        leading.push_back(tgt[*op.target]);
      }
    }
  }
  if (!leading.empty()) {
    if (src.empty()) throw std::invalid_argument("cannot attach target tokens to an empty source word");
    expected[0].insert(expected[0].begin(), leading.begin(), leading.end());
  }
  std::vector<TokenExample> out;
  out.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    std::vector<Token> exp;
    exp.reserve(expected[i].size());
    for (const auto& t : expected[i]) exp.push_back(Token{t.symbol, t.features, {}});
    out.push_back(TokenExample{src, i, std::move(exp)});
  }
  return out;
}

std::map<std::string, std::string> build_translit_map(const std::vector<std::pair<Word, Word>>& pairs,
                                                      const AlignParams& params) {
  std::map<std::string, std::map<std::string, std::size_t>> counts;
  std::map<std::string, std::string> out;
  for (const auto& [src, tgt] : pairs) {
    for (const auto& t : src.tokens) out.emplace(t.symbol, t.symbol);
    if (src.empty() || tgt.empty()) continue;
    Alignment a = align_pair(src, tgt, params);
    for (const auto& op : a.ops) {
      if (op.source && op.target) ++counts[src[*op.source].symbol][tgt[*op.target].symbol];
    }
  }
  for (const auto& [from, targets] : counts) {
    std::string best;
    std::size_t best_count = 0;
    // std::map iterates in lexicographic order, so strict > keeps the
    // smallest symbol among equally frequent ones.
    for (const auto& [to, count] : targets) {
      if (count > best_count) {
        best = to;
        best_count = count;
      }
    }
    out[from] = best;
  }
  return out;
}

Word apply_translit_map(const Word& w, const std::map<std::string, std::string>& map, const FeatureTable& table) {
  Word out;
  out.tokens.reserve(w.size());
  for (const auto& t : w.tokens) {
    auto it = map.find(t.symbol);
    if (it == map.end() || it->second == t.symbol) {
      out.tokens.push_back(Token{t.symbol, t.features, {}});
    } else {
      out.tokens.push_back(table.make_token(it->second));
    }
  }
  return out;
}

PremappedMatrix premap_matrix(const Problem& problem, std::size_t source, std::size_t target,
                              const AlignParams& params) {
  std::vector<std::pair<Word, Word>> pairs;
  for (std::size_t r = 0; r < problem.rows(); ++r) {
    const auto& s = problem.cell(r, source);
    const auto& t = problem.cell(r, target);
    if (s && t && !s->empty() && !t->empty()) pairs.emplace_back(*s, *t);
  }
  PremappedMatrix out;
  out.matrix = problem.matrix;
  if (pairs.empty()) return out;
  out.map = build_translit_map(pairs, params);
  for (auto& row : out.matrix) {
    if (row[source]) row[source] = apply_translit_map(*row[source], out.map, problem.feature_table);
  }
  return out;
}

std::vector<TokenExample> stress_examples(const Word& src, const Word& stress) {
  if (src.size() != stress.size()) {
    throw std::invalid_argument("stress word has " + std::to_string(stress.size()) + " tokens, source has " +
                                std::to_string(src.size()));
  }
  std::vector<TokenExample> out;
  out.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    out.push_back(TokenExample{src, i, {Token{stress[i].symbol, stress[i].features, {}}}});
  }
  return out;
}

std::string format_alignment(const Word& src, const Word& tgt, const Alignment& a) {
  static const std::string kGap = "\xE2\x80\x94";  // em dash
  std::string out;
  for (const auto& op : a.ops) {
    out += op.source ? src[*op.source].symbol : kGap;
    out += '\t';
    out += op.target ? tgt[*op.target].symbol : kGap;
    out += '\n';
  }
  return out;
}

}  // namespace phonosynth
