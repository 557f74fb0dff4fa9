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


#include "phonosynth/ndsyn.hpp"

#include <algorithm>
#include <future>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

namespace phonosynth {

CoverageRecord coverage(const ScoredRule& rule, std::span<const TokenExample> examples, const FeatureTable& table) {
  CoverageRecord rec{rule, {}, {}, {}};
  for (std::size_t i = 0; i < examples.size(); ++i) {
    switch (judge(rule.rule, examples[i], table)) {
      case Verdict::kCorrect: rec.correct.insert(i); break;
      case Verdict::kIncorrect: rec.incorrect.insert(i); break;
      case Verdict::kAbstain: rec.abstained.insert(i); break;
    }
  }
  return rec;
}

namespace {

bool expects_itself(const TokenExample& e) {
  return e.expected.size() == 1 && e.expected[0].symbol == e.token().symbol;
}

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

}  // namespace

Selection select_rules_detailed(std::span<const ScoredRule> candidates, std::span<const TokenExample> examples,
                                const FeatureTable& table, const SelectOptions& options) {
  // Cascade priority: rank, then text. Duplicates collapse onto the first.
  std::vector<std::pair<std::string, std::size_t>> order;
  {
    std::map<std::string, std::size_t> by_text;
    for (std::size_t c = 0; c < candidates.size(); ++c) by_text.emplace(to_text(candidates[c].rule), c);
    for (auto& [text, c] : by_text) order.emplace_back(text, c);
    std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
      return candidates[a.second].score > candidates[b.second].score;
    });
  }
  const std::size_t n = examples.size();
  const std::size_t m = order.size();
  std::vector<std::vector<Verdict>> verdict(m, std::vector<Verdict>(n));
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t i = 0; i < n; ++i) verdict[p][i] = judge(candidates[order[p].second].rule, examples[i], table);
  }

  std::vector<std::size_t> handler(n, kNone);
  std::vector<int> current(n, 0);
  for (std::size_t i = 0; i < n; ++i) current[i] = options.default_credit && expects_itself(examples[i]) ? 1 : 0;
  std::vector<bool> chosen(m, false);

  while (true) {
    std::size_t best = kNone;
    long best_gain = 0;
    for (std::size_t p = 0; p < m; ++p) {
      if (chosen[p]) continue;
      long gain = 0;
      long takeover_correct = 0;
      long takeover_incorrect = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (verdict[p][i] == Verdict::kAbstain || handler[i] < p) continue;
        int now = verdict[p][i] == Verdict::kCorrect ? 1 : 0;
        gain += now - current[i];
        (now ? takeover_correct : takeover_incorrect) += 1;
      }
      if (takeover_correct <= takeover_incorrect) continue;
      if (gain > best_gain) {
        best_gain = gain;
        best = p;
      }
    }
    if (best == kNone) break;
    chosen[best] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (verdict[best][i] == Verdict::kAbstain || handler[i] < best) continue;
      handler[i] = best;
      current[i] = verdict[best][i] == Verdict::kCorrect ? 1 : 0;
    }
  }

  Selection out;
  for (std::size_t p = 0; p < m; ++p) {
    if (!chosen[p]) continue;
    const ScoredRule& r = candidates[order[p].second];
    out.rules.push_back(r.rule);
    out.coverage.push_back(coverage(r, examples, table));
  }
  return out;
}

RuleList select_rules(std::span<const ScoredRule> candidates, std::span<const TokenExample> examples,
                      const FeatureTable& table, const SelectOptions& options) {
  return select_rules_detailed(candidates, examples, table, options).rules;
}

namespace {

std::vector<std::string> realized_under(const RuleList& rules, const TokenExample& e, const FeatureTable& table) {
  for (const auto& r : rules) {
    if (auto outcome = apply_rule(r, e.word, e.pos, table)) return outcome->realized_symbols();
  }
  return {e.token().symbol};
}

bool handled_correctly(const RuleList& rules, const TokenExample& e, const FeatureTable& table,
                       bool default_credit) {
  for (const auto& r : rules) {
    if (auto outcome = apply_rule(r, e.word, e.pos, table)) {
      auto accept = acceptable_outputs(e);
      return std::find(accept.begin(), accept.end(), outcome->realized_symbols()) != accept.end();
    }
  }
  return default_credit && expects_itself(e);
}

std::uint64_t pass_seed(std::uint64_t seed, std::size_t pass_index) {
  // splitmix64 step so neighbouring passes get unrelated streams.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (pass_index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

PassResult ndsyn_pass(std::span<const TokenExample> examples, const FeatureTable& table, const SynthConfig& cfg,
                      const PassOptions& options) {
  if (examples.empty()) throw std::invalid_argument("ndsyn_pass needs at least one example");
  cfg.validate();
  const std::size_t n = examples.size();
  ExampleIndex index(examples, table, cfg);
  std::mt19937_64 rng(pass_seed(cfg.seed, options.pass_index));

  PassResult result;
  result.trace.pass_index = options.pass_index;
  std::vector<bool> sampled(n, false);
  std::vector<ScoredRule> pool;
  std::set<std::string> pooled;
  Selection selection;
  SelectOptions select_options{options.default_credit};

  while (true) {
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < n; ++i) {
      if (!sampled[i] && !handled_correctly(selection.rules, examples[i], table, options.default_credit)) {
        pending.push_back(i);
      }
    }
    if (pending.empty()) break;
    std::shuffle(pending.begin(), pending.end(), rng);
    if (pending.size() > cfg.samples_per_iteration) pending.resize(cfg.samples_per_iteration);
    std::sort(pending.begin(), pending.end());

    std::vector<std::future<std::vector<ScoredRule>>> jobs;
    jobs.reserve(pending.size());
    for (std::size_t i : pending) {
      sampled[i] = true;
      result.trace.sampled.push_back(i);
      jobs.push_back(std::async(std::launch::async, [&index, &cfg, i] { return synthesize_rules(i, index, cfg); }));
    }
    for (auto& job : jobs) {
      for (auto& r : job.get()) {
        if (pooled.insert(to_text(r.rule)).second) pool.push_back(std::move(r));
      }
    }
    selection = select_rules_detailed(pool, examples, table, select_options);
  }

  result.rules = selection.rules;
  result.trace.candidate_count = pool.size();
  result.trace.selected = std::move(selection.coverage);
  for (std::size_t i = 0; i < n; ++i) {
    if (realized_under(result.rules, examples[i], table) == examples[i].expected_symbols()) {
      result.solved.insert(i);
    } else {
      result.unsolved.insert(i);
    }
  }
  return result;
}

std::size_t SynthesisResult::solved_count() const {
  return static_cast<std::size_t>(std::count(pair_solved.begin(), pair_solved.end(), true));
}

double program_score(const Program& p, const SynthConfig& cfg) {
  double total = 0.0;
  for (const auto& pass : p.passes) {
    for (const auto& r : pass) total += rank(r, cfg);
  }
  return total;
}

namespace {

// Tokens still wrong between the current word and the target.
std::size_t residual(const Word& current, const Word& target, ExampleMode mode, const AlignParams& params) {
  if (mode == ExampleMode::kPositional) {
    std::size_t cost = current.size() > target.size() ? current.size() - target.size() : target.size() - current.size();
    for (std::size_t i = 0; i < std::min(current.size(), target.size()); ++i) {
      if (current[i].symbol != target[i].symbol) ++cost;
    }
    return cost;
  }
  if (current.empty()) return target.size();
  if (target.empty()) return current.size();
  Alignment a = align_pair(current, target, params);
  std::size_t cost = 0;
  for (const auto& op : a.ops) {
    if (!op.source || !op.target || current[*op.source].symbol != target[*op.target].symbol) ++cost;
  }
  return cost;
}

std::vector<TokenExample> pair_examples(const Word& current, const Word& target, ExampleMode mode,
                                        const AlignParams& params) {
  if (current.empty()) return {};
  if (mode == ExampleMode::kPositional) return stress_examples(current, target);
  if (target.empty()) {
    std::vector<TokenExample> out;
    for (std::size_t i = 0; i < current.size(); ++i) out.push_back(TokenExample{current, i, {}});
    return out;
  }
  return examples_from_alignment(current, target, align_pair(current, target, params));
}

}  // namespace

SynthesisResult synthesize_program(const std::vector<TrainingPair>& pairs, ExampleMode mode,
                                   const FeatureTable& table, const SynthConfig& cfg) {
  if (pairs.empty()) throw std::invalid_argument("synthesize_program needs at least one training pair");
  cfg.validate();
  SynthesisResult out;
  std::vector<Word> current;
  current.reserve(pairs.size());
  for (const auto& p : pairs) current.push_back(p.source.untagged());

  auto total_residual = [&](const std::vector<Word>& words) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) total += residual(words[i], pairs[i].target, mode, cfg.align);
    return total;
  };

  std::size_t before = total_residual(current);
  for (std::size_t pass = 0; pass < cfg.max_passes; ++pass) {
    if (pass > 0 && before == 0) break;
    std::vector<TokenExample> examples;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      auto ex = pair_examples(current[i], pairs[i].target, mode, cfg.align);
      examples.insert(examples.end(), std::make_move_iterator(ex.begin()), std::make_move_iterator(ex.end()));
    }
    if (examples.empty()) break;
    PassResult pr = ndsyn_pass(examples, table, cfg, PassOptions{pass, pass > 0});
    if (pr.rules.empty()) break;
    std::vector<Word> next;
    next.reserve(current.size());
    for (const auto& w : current) next.push_back(run_pass(pr.rules, w, table));
    std::size_t after = total_residual(next);
    // The first pass may just copy; later passes must make progress.
    if (after > before || (pass > 0 && after == before)) break;
    out.program.passes.push_back(std::move(pr.rules));
    out.passes.push_back(std::move(pr.trace));
    current = std::move(next);
    before = after;
  }

  out.pair_solved.reserve(pairs.size());
  for (const auto& p : pairs) out.pair_solved.push_back(same_symbols(run_program(out.program, p.source, table), p.target));
  out.score = program_score(out.program, cfg);
  return out;
}

}  // namespace phonosynth
