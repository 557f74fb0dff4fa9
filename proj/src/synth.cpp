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

#include "phonosynth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "bits.hpp"

namespace phonosynth {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::kNoFeature: return "nofeature";
    case Variant::kToken: return "token";
    case Variant::kFeature: return "feature";
  }
  return "feature";
}

Variant variant_from_string(std::string_view s) {
  if (s == "nofeature") return Variant::kNoFeature;
  if (s == "token") return Variant::kToken;
  if (s == "feature") return Variant::kFeature;
  throw std::invalid_argument("unknown variant '" + std::string(s) + "'");
}

SynthConfig SynthConfig::for_variant(Variant v) {
  SynthConfig cfg;
  cfg.variant = v;
  if (v == Variant::kFeature) {
    cfg.op_scores = {{"Is", 2.0}, {"IsToken", 1.0}};
  } else {
    cfg.op_scores = {{"IsToken", 2.0}, {"Is", 1.0}};
  }
  return cfg;
}

double SynthConfig::op_score(const std::string& op) const {
  auto it = op_scores.find(op);
  return it == op_scores.end() ? 0.0 : it->second;
}

std::size_t SynthConfig::guard_depth_limit() const {
  auto width = static_cast<std::size_t>(window_left + window_right + 1);
  return std::min(max_guard_depth, width);
}

void SynthConfig::validate() const {
  if (top_k < 1) throw std::invalid_argument("top_k must be at least 1");
  if (max_passes < 1) throw std::invalid_argument("max_passes must be at least 1");
  if (window_left < 0 || window_right < 0) throw std::invalid_argument("window bounds must be non-negative");
  if (samples_per_iteration < 1) throw std::invalid_argument("samples_per_iteration must be at least 1");
}

// ---------------------------------------------------------------------------
// Ranking

namespace {

struct RankTally {
  const SynthConfig& cfg;
  double score = 0.0;

  void op(const std::string& name) { score += cfg.op_score(name) - cfg.length_penalty; }
  void constant() { score -= cfg.constant_penalty + cfg.length_penalty; }
  void offset(int o) { score -= cfg.offset_penalty * std::abs(o) + cfg.length_penalty; }
};

void tally(RankTally& t, const Predicate& g) {
  t.op("IfThen");
  if (g.negated) t.op("Not");
  std::visit(Overloaded{
                 [&](const IsToken& a) { t.op("IsToken"), t.constant(), t.offset(a.offset); },
                 [&](const HasFeature& a) { t.op("Is"), t.constant(), t.offset(a.offset); },
                 [&](const TransformationApplied& a) {
                   t.op("TransformationApplied"), t.constant(), t.offset(a.offset);
                 },
             },
             g.atom);
}

void tally(RankTally& t, const Transformation& action) {
  t.op(op_name(action));
  std::visit(Overloaded{
                 [&](const ReplaceBy&) { t.constant(), t.constant(); },
                 [&](const ReplaceAnyBy&) { t.constant(); },
                 [&](const Insert& r) {
                   for (std::size_t i = 0; i < r.symbols.size(); ++i) t.constant();
                 },
                 [&](const Delete&) {},
                 [&](const CopyReplace& r) { t.offset(r.offset); },
                 [&](const CopyInsert& r) { t.offset(r.offset); },
                 [&](const Identity&) {},
             },
             action);
}

}  // namespace

double rank(const Predicate& guard, const SynthConfig& cfg) {
  RankTally t{cfg};
  tally(t, guard);
  return t.score;
}

double rank(const Rule& rule, const SynthConfig& cfg) {
  RankTally t{cfg};
  for (const auto& g : rule.guards) tally(t, g);
  tally(t, rule.action);
  return t.score;
}

// ---------------------------------------------------------------------------
// Verdicts

std::vector<std::vector<std::string>> acceptable_outputs(const TokenExample& e) {
  std::vector<std::string> expected = e.expected_symbols();
  std::vector<std::vector<std::string>> out{expected};
  if (expected.size() >= 2 && expected.front() != e.token().symbol) {
    out.push_back({expected.front()});
    // The last token only helps if something precedes this position to carry
    // the rest as an insertion.
    if (e.pos > 0 && expected.back() != expected.front()) out.push_back({expected.back()});
  }
  return out;
}

namespace {

bool is_acceptable(const std::vector<std::string>& realized, const std::vector<std::vector<std::string>>& accept) {
  return std::find(accept.begin(), accept.end(), realized) != accept.end();
}

}  // namespace

Verdict judge(const Rule& rule, const TokenExample& e, const FeatureTable& table) {
  auto outcome = apply_rule(rule, e.word, e.pos, table);
  if (!outcome) return Verdict::kAbstain;
  return is_acceptable(outcome->realized_symbols(), acceptable_outputs(e)) ? Verdict::kCorrect
                                                                           : Verdict::kIncorrect;
}

// ---------------------------------------------------------------------------
// Transformation witnesses

namespace {

void add_unique(std::vector<Transformation>& out, Transformation t) {
  if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(std::move(t));
}

std::vector<Transformation> witnesses_for(const TokenExample& e, const std::vector<std::vector<std::string>>& accept,
                                          const SynthConfig& cfg) {
  std::vector<Transformation> out;
  const std::string& x = e.token().symbol;
  auto symbol_at = [&](int offset) -> const std::string* {
    long long p = static_cast<long long>(e.pos) + offset;
    if (p < 0 || p >= static_cast<long long>(e.word.size())) return nullptr;
    return &e.word[static_cast<std::size_t>(p)].symbol;
  };
  for (const auto& o : accept) {
    if (o.empty()) {
      add_unique(out, Delete{});
    } else if (o.size() == 1) {
      const std::string& y = o[0];
      if (y == x) {
        add_unique(out, Identity{});
      } else {
        add_unique(out, ReplaceBy{x, y});
      }
      add_unique(out, ReplaceAnyBy{y});
      for (int i = -cfg.window_left; i <= cfg.window_right; ++i) {
        const std::string* s = i == 0 ? nullptr : symbol_at(i);
        if (s && *s == y) add_unique(out, CopyReplace{i});
      }
    } else if (o.front() == x) {
      add_unique(out, Insert{std::vector<std::string>(o.begin() + 1, o.end())});
      if (o.size() == 2) {
        for (int i = -cfg.window_left; i <= cfg.window_right; ++i) {
          const std::string* s = i == 0 ? nullptr : symbol_at(i);
          if (s && *s == o[1]) add_unique(out, CopyInsert{i});
        }
      }
    }
  }
  return out;
}

}  // namespace

std::vector<Transformation> witness_transformation(const TransformationSpec& spec, const SynthConfig& cfg) {
  if (spec.empty()) throw std::invalid_argument("witness_transformation needs at least one constraint");
  std::vector<Transformation> result = witnesses_for(*spec.front().example, spec.front().acceptable, cfg);
  for (std::size_t i = 1; i < spec.size() && !result.empty(); ++i) {
    std::vector<Transformation> kept;
    for (const auto& t : result) {
      const TokenExample& e = *spec[i].example;
      // Consistency is checked semantically so offsets and payloads that only
      // coincide with this example's context are handled uniformly.
      FeatureTable empty;
      auto outcome = apply_transformation(t, e.word, e.pos, empty);
      if (outcome && is_acceptable(outcome->realized_symbols(), spec[i].acceptable)) kept.push_back(t);
    }
    result = std::move(kept);
  }
  std::sort(result.begin(), result.end(),
            [](const Transformation& a, const Transformation& b) { return to_text(a) < to_text(b); });
  return result;
}

// ---------------------------------------------------------------------------
// Predicate witnesses

PredicateUniverse PredicateUniverse::from_examples(std::span<const TokenExample> examples, const FeatureTable& table,
                                                   const SynthConfig& cfg) {
  std::set<std::string> symbols;
  std::set<std::string> features;
  std::set<TransformationTag> tags;
  const Word* last = nullptr;
  for (const auto& e : examples) {
    if (last == &e.word) continue;
    last = &e.word;
    for (const auto& t : e.word.tokens) {
      symbols.insert(t.symbol);
      for (const auto& [name, value] : t.features) {
        if (value) features.insert(name);
      }
      for (const auto& f : table.features_for(t.symbol)) {
        if (f.second) features.insert(f.first);
      }
      tags.insert(t.tags.begin(), t.tags.end());
    }
  }
  PredicateUniverse u;
  u.symbols.assign(symbols.begin(), symbols.end());
  if (cfg.variant != Variant::kNoFeature) u.features.assign(features.begin(), features.end());
  u.tags.assign(tags.begin(), tags.end());
  return u;
}

std::vector<Predicate> PredicateUniverse::predicates(const SynthConfig& cfg) const {
  std::vector<Predicate> atoms;
  for (int o = -cfg.window_left; o <= cfg.window_right; ++o) {
    for (const auto& s : symbols) atoms.push_back(Predicate{IsToken{s, o}, false});
    if (cfg.variant != Variant::kNoFeature) {
      for (const auto& f : features) atoms.push_back(Predicate{HasFeature{f, o}, false});
    }
    for (const auto& t : tags) atoms.push_back(Predicate{TransformationApplied{t, o}, false});
  }
  std::vector<Predicate> out = atoms;
  for (const auto& a : atoms) out.push_back(Not(a));
  return out;
}

std::vector<Predicate> witness_predicate(const PredicateSpec& spec, const PredicateUniverse& universe,
                                         const SynthConfig& cfg) {
  std::vector<Predicate> out;
  for (const auto& p : universe.predicates(cfg)) {
    bool ok = true;
    for (const auto* e : spec.positives) {
      if (!eval_predicate(p, e->word, e->pos)) {
        ok = false;
        break;
      }
    }
    for (std::size_t i = 0; ok && i < spec.negatives.size(); ++i) {
      if (eval_predicate(p, spec.negatives[i]->word, spec.negatives[i]->pos)) ok = false;
    }
    if (ok) out.push_back(p);
  }
  std::stable_sort(out.begin(), out.end(), [&](const Predicate& a, const Predicate& b) {
    double ra = rank(a, cfg);
    double rb = rank(b, cfg);
    if (ra != rb) return ra > rb;
    return to_text(a) < to_text(b);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Example index

struct ExampleIndex::Impl {
  std::vector<Predicate> predicates;
  std::vector<double> predicate_rank;
  std::vector<std::string> predicate_text;
  std::vector<Bits> truth;
  std::vector<std::vector<std::vector<std::string>>> acceptable;
};

ExampleIndex::ExampleIndex(std::span<const TokenExample> examples, const FeatureTable& table, const SynthConfig& cfg)
    : examples_(examples),
      table_(&table),
      universe_(PredicateUniverse::from_examples(examples, table, cfg)),
      impl_(std::make_unique<Impl>()) {
  impl_->predicates = universe_.predicates(cfg);
  // Structural order makes every later tie-break by index deterministic.
  std::vector<std::pair<std::string, Predicate>> keyed;
  keyed.reserve(impl_->predicates.size());
  for (auto& p : impl_->predicates) keyed.emplace_back(to_text(p), std::move(p));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  impl_->predicates.clear();
  for (auto& [text, p] : keyed) {
    impl_->predicate_rank.push_back(rank(p, cfg));
    impl_->predicate_text.push_back(text);
    impl_->predicates.push_back(std::move(p));
  }
  const std::size_t n = examples.size();
  impl_->truth.reserve(impl_->predicates.size());
  for (const auto& p : impl_->predicates) {
    Bits b(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (eval_predicate(p, examples[i].word, examples[i].pos)) b.set(i);
    }
    impl_->truth.push_back(std::move(b));
  }
  impl_->acceptable.reserve(n);
  for (const auto& e : examples) impl_->acceptable.push_back(acceptable_outputs(e));
}

ExampleIndex::~ExampleIndex() = default;

// ---------------------------------------------------------------------------
// Rule search

namespace {

struct Node {
  std::vector<std::size_t> guards;  // predicate indices, sorted
  Bits fired;
};

struct Found {
  std::vector<std::size_t> guards;
  bool precise = false;
};

// Keeps the first `beam` entries of `order` (all if beam == 0).
void truncate(std::vector<std::size_t>& order, std::size_t beam) {
  if (beam != 0 && order.size() > beam) order.resize(beam);
}

}  // namespace

std::vector<ScoredRule> synthesize_rules(std::size_t sampled, const ExampleIndex& index, const SynthConfig& cfg) {
  const auto& examples = index.examples();
  if (sampled >= examples.size()) throw std::out_of_range("sampled example index out of range");
  const auto& impl = index.impl();
  const TokenExample& e = examples[sampled];
  const std::size_t n = examples.size();
  const std::size_t depth_limit = cfg.guard_depth_limit();

  TransformationSpec spec{OutputConstraint{&e, impl.acceptable[sampled]}};
  std::vector<Transformation> actions = witness_transformation(spec, cfg);

  // Predicates that hold at the sampled position; only these can guard a
  // rule that must fire there.
  std::vector<std::size_t> live;
  for (std::size_t p = 0; p < impl.predicates.size(); ++p) {
    if (impl.truth[p].test(sampled)) live.push_back(p);
  }

  std::vector<ScoredRule> results;
  std::set<std::string> seen;
  std::vector<std::pair<bool, ScoredRule>> collected;

  for (const auto& action : actions) {
    Bits fired0(n);
    Bits correct(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto outcome = apply_transformation(action, examples[i].word, examples[i].pos, index.table());
      if (!outcome) continue;
      fired0.set(i);
      if (is_acceptable(outcome->realized_symbols(), impl.acceptable[i])) correct.set(i);
    }

    std::vector<Found> found;
    std::vector<Node> frontier{Node{{}, fired0}};
    std::set<std::vector<std::size_t>> visited;
    for (std::size_t depth = 0; depth <= depth_limit && !frontier.empty(); ++depth) {
      std::vector<Node> next;
      for (const auto& node : frontier) {
        Bits neg = node.fired.minus(correct);
        if (neg.none()) {
          found.push_back(Found{node.guards, true});
          continue;
        }
        if (depth == depth_limit) {
          found.push_back(Found{node.guards, false});
          continue;
        }
        Bits pos = node.fired & correct;
        std::vector<std::size_t> perfect;
        std::vector<std::size_t> partial;
        std::vector<long> partial_gain(impl.predicates.size(), 0);
        std::vector<std::size_t> kept(impl.predicates.size(), 0);
        for (std::size_t p : live) {
          if (std::binary_search(node.guards.begin(), node.guards.end(), p)) continue;
          const Bits& truth = impl.truth[p];
          std::size_t neg_left = neg.count_and(truth);
          std::size_t neg_total = neg.count();
          if (neg_left == neg_total) continue;  // removes nothing
          std::size_t pos_kept = pos.count_and(truth);
          kept[p] = pos_kept;
          if (neg_left == 0) {
            perfect.push_back(p);
          } else {
            partial.push_back(p);
            partial_gain[p] = static_cast<long>(neg_total - neg_left) - static_cast<long>(pos.count() - pos_kept);
          }
        }
        auto extend = [&](std::size_t p) {
          Node child{node.guards, node.fired & impl.truth[p]};
          child.guards.insert(std::lower_bound(child.guards.begin(), child.guards.end(), p), p);
          return child;
        };
        if (!perfect.empty()) {
          std::vector<std::size_t> by_rank = perfect;
          std::stable_sort(by_rank.begin(), by_rank.end(), [&](std::size_t a, std::size_t b) {
            if (impl.predicate_rank[a] != impl.predicate_rank[b]) {
              return impl.predicate_rank[a] > impl.predicate_rank[b];
            }
            return kept[a] > kept[b];
          });
          std::vector<std::size_t> by_cover = perfect;
          std::stable_sort(by_cover.begin(), by_cover.end(), [&](std::size_t a, std::size_t b) {
            if (kept[a] != kept[b]) return kept[a] > kept[b];
            return impl.predicate_rank[a] > impl.predicate_rank[b];
          });
          truncate(by_rank, cfg.guard_beam);
          truncate(by_cover, cfg.guard_beam);
          std::set<std::size_t> chosen(by_rank.begin(), by_rank.end());
          chosen.insert(by_cover.begin(), by_cover.end());
          for (std::size_t p : chosen) {
            Node child = extend(p);
            if (visited.insert(child.guards).second) found.push_back(Found{child.guards, true});
          }
          // An unlimited beam also explores longer conjunctions of partial
          // guards, which may outrank a single distant one.
          if (cfg.guard_beam != 0) continue;
        }
        if (partial.empty()) {
          if (perfect.empty()) found.push_back(Found{node.guards, false});
          continue;
        }
        std::stable_sort(partial.begin(), partial.end(), [&](std::size_t a, std::size_t b) {
          if (partial_gain[a] != partial_gain[b]) return partial_gain[a] > partial_gain[b];
          return impl.predicate_rank[a] > impl.predicate_rank[b];
        });
        truncate(partial, cfg.guard_beam);
        for (std::size_t p : partial) {
          Node child = extend(p);
          if (visited.insert(child.guards).second) next.push_back(std::move(child));
        }
      }
      frontier = std::move(next);
    }

    for (const auto& f : found) {
      Rule rule;
      for (std::size_t p : f.guards) rule.guards.push_back(impl.predicates[p]);
      rule.action = action;
      std::string key = to_text(rule);
      if (!seen.insert(key).second) continue;
      double score = rank(rule, cfg);
      collected.emplace_back(f.precise, ScoredRule{std::move(rule), score});
    }
  }

  std::stable_sort(collected.begin(), collected.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first;
    if (a.second.score != b.second.score) return a.second.score > b.second.score;
    return to_text(a.second.rule) < to_text(b.second.rule);
  });
  for (auto& [precise, rule] : collected) {
    if (results.size() >= cfg.top_k) break;
    results.push_back(std::move(rule));
  }
  return results;
}

std::vector<ScoredRule> synthesize_rules(const TokenExample& example, std::span<const TokenExample> all_examples,
                                         const FeatureTable& table, const SynthConfig& cfg) {
  std::vector<TokenExample> pool(all_examples.begin(), all_examples.end());
  std::size_t sampled = pool.size();
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool[i].pos == example.pos && same_symbols(pool[i].word, example.word) &&
        pool[i].expected_symbols() == example.expected_symbols()) {
      sampled = i;
      break;
    }
  }
  if (sampled == pool.size()) pool.push_back(example);
  ExampleIndex index(pool, table, cfg);
  return synthesize_rules(sampled, index, cfg);
}

}  // namespace phonosynth
