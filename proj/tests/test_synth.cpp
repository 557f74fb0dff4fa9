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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "phonosynth/synth.hpp"
#include "rule_oracle.hpp"
#include "test_util.hpp"

using namespace phonosynth;
using phonosynth::testing::make_table;

namespace {

Predicate is_token(const std::string& s, int o) { return Predicate{IsToken{s, o}, false}; }
Predicate is_feature(const std::string& f, int o) { return Predicate{HasFeature{f, o}, false}; }

bool mentions_is(const Rule& r) {
  for (const auto& g : r.guards) {
    if (std::holds_alternative<HasFeature>(g.atom)) return true;
  }
  return false;
}

// Prefix data with a single fricative. Only the features needed to tell the
// contexts apart are declared.
FeatureTable prefix_table() {
  return make_table({{"d", {"consonant"}},
                     {"m", {"consonant"}},
                     {"p", {"consonant"}},
                     {"t", {"consonant"}},
                     {"n", {"consonant"}},
                     {"ŋ", {"consonant"}},
                     {"s", {"consonant", "fricative"}},
                     {"i", {"vowel"}},
                     {"a", {"vowel"}},
                     {"u", {"vowel"}}});
}

std::vector<TokenExample> prefix_examples(const FeatureTable& t) {
  std::vector<TokenExample> out;
  auto add = [&](const std::string& src, const std::vector<std::vector<std::string>>& expected) {
    Word w = tokenize(src, t);
    for (std::size_t i = 0; i < w.size(); ++i) {
      std::vector<Token> exp;
      for (const auto& s : expected[i]) exp.push_back(t.make_token(s));
      out.push_back(TokenExample{w, i, exp});
    }
  };
  // di- becomes mas- before s and ma- with gemination elsewhere.
  add("d i s u", {{"m", "a"}, {"s"}, {"s"}, {"u"}});
  add("d i p a s u ŋ", {{"m"}, {"a"}, {"p", "p"}, {"a"}, {"s"}, {"u"}, {"ŋ"}});
  add("d i t u n u", {{"m"}, {"a"}, {"t", "t"}, {"u"}, {"n"}, {"u"}});
  return out;
}

}  // namespace

TEST_CASE("feature guards outrank token guards only under the feature variant") {
  Rule feature{{is_feature("fricative", 0)}, ReplaceBy{"i", "s"}};
  Rule token{{is_token("s", 0)}, ReplaceBy{"i", "s"}};
  auto fcfg = SynthConfig::for_variant(Variant::kFeature);
  auto tcfg = SynthConfig::for_variant(Variant::kToken);
  CHECK(rank(feature, fcfg) > rank(token, fcfg));
  CHECK(rank(feature, tcfg) < rank(token, tcfg));
}

TEST_CASE("larger offsets rank lower") {
  auto cfg = SynthConfig::for_variant(Variant::kFeature);
  CHECK(rank(Rule{{is_token("p", 2)}, Identity{}}, cfg) < rank(Rule{{is_token("p", 1)}, Identity{}}, cfg));
  CHECK(rank(Rule{{}, CopyReplace{-2}}, cfg) < rank(Rule{{}, CopyReplace{1}}, cfg));
}

TEST_CASE("rank sums node scores") {
  SynthConfig cfg = SynthConfig::for_variant(Variant::kFeature);
  // Identity: one node.
  CHECK(rank(Rule{{}, Identity{}}, cfg) == doctest::Approx(-0.5));
  // ReplaceBy plus two literals.
  CHECK(rank(Rule{{}, ReplaceBy{"i", "s"}}, cfg) == doctest::Approx(-0.5 - 2 * 0.6));
  // IfThen, Is (+2), literal, offset 1, then Identity.
  CHECK(rank(Rule{{is_feature("f", 1)}, Identity{}}, cfg) == doctest::Approx(-0.5 + 1.5 - 0.6 - 1.0 - 0.5));
  // Not adds one more node.
  CHECK(rank(Rule{{Not(is_feature("f", 1))}, Identity{}}, cfg) ==
        doctest::Approx(-0.5 - 0.5 + 1.5 - 0.6 - 1.0 - 0.5));
}

TEST_CASE("adding a guard always lowers the rank") {
  std::mt19937_64 rng(99);
  for (Variant v : {Variant::kFeature, Variant::kToken, Variant::kNoFeature}) {
    auto cfg = SynthConfig::for_variant(v);
    for (int i = 0; i < 500; ++i) {
      auto fx = oracle::random_rule_fixture(rng, 3, 3);
      Rule r = parse_rule(fx.hidden);
      for (int o = -3; o <= 3; ++o) {
        for (bool neg : {false, true}) {
          for (const auto& atom : {PredicateAtom{IsToken{"a", o}}, PredicateAtom{HasFeature{"f", o}},
                                   PredicateAtom{TransformationApplied{TransformationTag{"Identity", {}}, o}}}) {
            Rule longer = r;
            longer.guards.push_back(Predicate{atom, neg});
            CHECK(rank(longer, cfg) < rank(r, cfg));
          }
        }
      }
    }
  }
}

TEST_CASE("acceptable outputs allow partial progress on one-to-many changes") {
  auto t = make_table({{"a", {}}, {"l", {}}, {"s", {}}, {"h", {}}});
  Word w = tokenize("a l a", t);
  TokenExample lsh{w, 1, {t.make_token("s"), t.make_token("h")}};
  auto acc = acceptable_outputs(lsh);
  CHECK(acc == std::vector<std::vector<std::string>>{{"s", "h"}, {"s"}, {"h"}});
  TokenExample first{w, 0, {t.make_token("s"), t.make_token("h")}};
  CHECK(acceptable_outputs(first) == std::vector<std::vector<std::string>>{{"s", "h"}, {"s"}});
  TokenExample ins{w, 0, {t.make_token("a"), t.make_token("h")}};
  CHECK(acceptable_outputs(ins) == std::vector<std::vector<std::string>>{{"a", "h"}});
  TokenExample same{w, 0, {t.make_token("a")}};
  CHECK(acceptable_outputs(same).size() == 1);
}

TEST_CASE("transformation witnesses invert each operator") {
  auto t = make_table({{"a", {}}, {"b", {}}, {"c", {}}});
  auto cfg = SynthConfig::for_variant(Variant::kFeature);
  Word w = tokenize("a b c", t);
  auto texts = [&](const TokenExample& e) {
    std::vector<std::string> out;
    for (const auto& x : witness_transformation({OutputConstraint{&e, acceptable_outputs(e)}}, cfg)) {
      out.push_back(to_text(x));
    }
    return out;
  };
  TokenExample to_c{w, 1, {t.make_token("c")}};
  CHECK(texts(to_c) == std::vector<std::string>{"CopyReplace(x, w, 1)", "ReplaceAnyBy(x, \"c\")",
                                                 "ReplaceBy(x, \"b\", \"c\")"});
  TokenExample keep{w, 1, {t.make_token("b")}};
  CHECK(texts(keep) == std::vector<std::string>{"Identity(x)", "ReplaceAnyBy(x, \"b\")"});
  TokenExample gone{w, 1, {}};
  CHECK(texts(gone) == std::vector<std::string>{"Delete(x)"});
  TokenExample grow{w, 1, {t.make_token("b"), t.make_token("a")}};
  CHECK(texts(grow) == std::vector<std::string>{"CopyInsert(x, w, -1)", "Insert(x, \"a\")"});

  // Intersection across examples keeps only what fits both.
  Word w2 = tokenize("c b a", t);
  TokenExample other{w2, 1, {t.make_token("c")}};
  auto both = witness_transformation(
      {OutputConstraint{&to_c, acceptable_outputs(to_c)}, OutputConstraint{&other, acceptable_outputs(other)}}, cfg);
  std::vector<std::string> both_text;
  for (const auto& x : both) both_text.push_back(to_text(x));
  CHECK(both_text == std::vector<std::string>{"ReplaceAnyBy(x, \"c\")", "ReplaceBy(x, \"b\", \"c\")"});
}

TEST_CASE("predicate witnesses separate positives from negatives") {
  auto t = make_table({{"a", {"vowel"}}, {"b", {}}, {"c", {}}});
  Word w = tokenize("a b c a", t);
  TokenExample pos_b{w, 1, {}};
  TokenExample pos_c{w, 2, {}};
  std::vector<TokenExample> all{pos_b, pos_c};
  for (Variant v : {Variant::kFeature, Variant::kNoFeature}) {
    auto cfg = SynthConfig::for_variant(v);
    auto universe = PredicateUniverse::from_examples(all, t, cfg);
    auto preds = witness_predicate(PredicateSpec{{&pos_b}, {&pos_c}}, universe, cfg);
    REQUIRE_FALSE(preds.empty());
    for (const auto& p : preds) {
      CHECK(eval_predicate(p, w, 1));
      CHECK_FALSE(eval_predicate(p, w, 2));
      if (v == Variant::kNoFeature) CHECK_FALSE(std::holds_alternative<HasFeature>(p.atom));
    }
    for (std::size_t i = 1; i < preds.size(); ++i) CHECK(rank(preds[i - 1], cfg) >= rank(preds[i], cfg));
  }
}

TEST_CASE("a lone identity example ranks plain Identity first") {
  auto t = make_table({{"a", {}}, {"b", {}}});
  Word w = tokenize("a b", t);
  std::vector<TokenExample> ex{TokenExample{w, 0, {t.make_token("a")}}};
  auto cfg = SynthConfig::for_variant(Variant::kFeature);
  auto rules = synthesize_rules(ex[0], ex, t, cfg);
  REQUIRE_FALSE(rules.empty());
  CHECK(to_text(rules[0].rule) == "Identity(x)");
}

TEST_CASE("the feature variant explains the prefix vowel with a fricative context") {
  auto t = prefix_table();
  auto ex = prefix_examples(t);
  auto cfg = SynthConfig::for_variant(Variant::kFeature);
  ExampleIndex index(ex, t, cfg);
  // The i of "d i s u".
  auto rules = synthesize_rules(1, index, cfg);
  REQUIRE_FALSE(rules.empty());
  CHECK(to_text(rules[0].rule) == R"(IfThen(Is(w, "fricative", 1), ReplaceBy(x, "i", "s")))");

  auto tcfg = SynthConfig::for_variant(Variant::kToken);
  ExampleIndex tindex(ex, t, tcfg);
  auto trules = synthesize_rules(1, tindex, tcfg);
  REQUIRE_FALSE(trules.empty());
  // A token guard at offset 0 is cheap here, so ReplaceAnyBy wins.
  CHECK(to_text(trules[0].rule) == R"(IfThen(IsToken(w, "i", 0), IfThen(IsToken(w, "s", 1), ReplaceAnyBy(x, "s"))))");
  CHECK(trules[0].score > rank(parse_rule(R"(IfThen(IsToken(w, "s", 1), ReplaceBy(x, "i", "s")))"), tcfg));
}

TEST_CASE("every returned rule is sound at its sampled example") {
  std::mt19937_64 rng(1234);
  auto cfg = SynthConfig::for_variant(Variant::kFeature);
  for (int i = 0; i < 300; ++i) {
    auto fx = oracle::random_rule_fixture(rng, 2, 3);
    ExampleIndex index(fx.examples, fx.table, cfg);
    for (std::size_t s = 0; s < fx.examples.size(); ++s) {
      auto rules = synthesize_rules(s, index, cfg);
      CHECK(rules.size() <= cfg.top_k);
      for (const auto& r : rules) {
        CAPTURE(to_text(r.rule));
        CHECK(judge(r.rule, fx.examples[s], fx.table) == Verdict::kCorrect);
        CHECK(r.score == doctest::Approx(rank(r.rule, cfg)));
      }
      for (std::size_t k = 1; k < rules.size(); ++k) {
        // Within the precise block and within the imprecise block, rank decreases.
        bool prev_precise = oracle::consistent(rules[k - 1].rule, fx.examples, s, fx.table);
        bool precise = oracle::consistent(rules[k].rule, fx.examples, s, fx.table);
        CHECK((prev_precise || !precise));
        if (prev_precise == precise) CHECK(rules[k - 1].score >= rules[k].score);
      }
    }
  }
}

TEST_CASE("the no-feature variant never proposes Is") {
  std::mt19937_64 rng(5);
  auto cfg = SynthConfig::for_variant(Variant::kNoFeature);
  for (int i = 0; i < 200; ++i) {
    auto fx = oracle::random_rule_fixture(rng, 2, 2);
    ExampleIndex index(fx.examples, fx.table, cfg);
    CHECK(index.universe().features.empty());
    for (const auto& r : synthesize_rules(fx.sampled, index, cfg)) CHECK_FALSE(mentions_is(r.rule));
  }
}

TEST_CASE("exhaustive search agrees with the synthesizer on small fixtures") {
  std::mt19937_64 rng(42);
  for (Variant v : {Variant::kFeature, Variant::kToken}) {
    SynthConfig cfg = SynthConfig::for_variant(v);
    cfg.window_left = cfg.window_right = 1;
    cfg.max_guard_depth = 2;
    cfg.guard_beam = 0;
    cfg.top_k = 1000000;
    for (int i = 0; i < 150; ++i) {
      auto fx = oracle::random_rule_fixture(rng, 1, 2);
      CAPTURE(fx.hidden);
      auto found = oracle::enumerate_rules(fx.examples, fx.sampled, fx.table, cfg, 1, 2);
      ExampleIndex index(fx.examples, fx.table, cfg);
      auto rules = synthesize_rules(fx.sampled, index, cfg);
      bool synth_solves = !rules.empty() && oracle::consistent(rules[0].rule, fx.examples, fx.sampled, fx.table);
      REQUIRE(synth_solves == !found.empty());
      if (found.empty()) continue;
      double best = std::max_element(found.begin(), found.end(), [](const auto& a, const auto& b) {
                      return a.score < b.score;
                    })->score;
      CHECK(rules[0].score == doctest::Approx(best));
      CHECK(std::any_of(found.begin(), found.end(), [&](const auto& c) {
        return c.score >= best - 1e-9 && oracle::canonical(c.rule) == oracle::canonical(rules[0].rule);
      }));
      // Minimal rules with at most one guard are all returned.
      std::set<std::string> returned;
      for (const auto& r : rules) returned.insert(oracle::canonical(r.rule));
      for (const auto& c : found) {
        if (c.rule.guards.size() > 1) continue;
        if (!c.rule.guards.empty() && oracle::consistent(Rule{{}, c.rule.action}, fx.examples, fx.sampled, fx.table)) {
          continue;
        }
        CHECK(returned.count(oracle::canonical(c.rule)) == 1);
      }
    }
  }
}

TEST_CASE("configuration validation") {
  SynthConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.top_k = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SynthConfig{};
  cfg.window_left = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK(variant_from_string("token") == Variant::kToken);
  CHECK_THROWS(variant_from_string("tokens"));
  SynthConfig narrow;
  narrow.window_left = 0;
  narrow.window_right = 1;
  CHECK(narrow.guard_depth_limit() == 2);
}
