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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "oracles.hpp"
#include "phonosynth/harness.hpp"
#include "phonosynth/metrics.hpp"
#include "test_util.hpp"

using namespace phonosynth;
using phonosynth::testing::fixture;
using phonosynth::testing::split;

namespace {

Word words(const std::string& s) {
  Word w;
  for (const auto& x : split(s)) w.tokens.push_back(Token{x, {}, {}});
  return w;
}

int cli(const std::vector<std::string>& args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  int rc = run_cli(args, out, err);
  if (out_text) *out_text = out.str();
  return rc;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("phonosynth_test_" + name);
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("chrF of a word with itself is one and of disjoint words zero") {
  CHECK(chrf(words("a b c"), words("a b c")) == doctest::Approx(1.0));
  CHECK(chrf(words("a"), words("a")) == doctest::Approx(1.0));
  CHECK(chrf(words("x y"), words("a b c")) == 0.0);
  CHECK(chrf(Word{}, words("a b")) == 0.0);
  CHECK_THROWS_AS(chrf(words("a"), Word{}), std::invalid_argument);
  CHECK_THROWS_AS(chrf(words("a"), words("a"), 0), std::invalid_argument);
}

TEST_CASE("chrF matches an independent computation") {
  // Unigram P = R = 2/3, bigram P = R = 1/2, so F = 7/12.
  CHECK(chrf(words("a b c"), words("a b d"), 2) == doctest::Approx(7.0 / 12.0).epsilon(1e-12));
  CHECK(oracle::chrf(split("a b c"), split("a b d"), 2, 3.0) == doctest::Approx(7.0 / 12.0).epsilon(1e-12));

  std::mt19937_64 rng(3);
  auto rand_word = [&](std::size_t min_len) {
    std::vector<std::string> w;
    auto len = std::uniform_int_distribution<std::size_t>(min_len, 6)(rng);
    for (std::size_t i = 0; i < len; ++i) w.push_back(std::string(1, "abc"[rng() % 3]));
    return w;
  };
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += x + " ";
    return s;
  };
  for (int i = 0; i < 2000; ++i) {
    auto p = rand_word(0);
    auto g = rand_word(1);
    double v = chrf(words(join(p)), words(join(g)));
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(v == doctest::Approx(oracle::chrf(p, g, 3, 3.0)).epsilon(1e-12));
  }
}

TEST_CASE("exact score is the fraction of correct cells") {
  CHECK(exact_score({true, true, false, true}) == 0.75);
  CHECK(exact_score({}) == 0.0);
}

TEST_CASE("stress problems stay out of chrF means") {
  ProblemReport morph;
  morph.id = "m";
  morph.category = Category::kMorphophonology;
  morph.exact = 0.5;
  morph.chrf = 0.8;
  ProblemReport stress;
  stress.id = "s";
  stress.category = Category::kStress;
  stress.exact = 1.0;
  ProblemReport morph2 = morph;
  morph2.id = "a";
  morph2.exact = 1.0;
  morph2.chrf = 0.4;
  auto r = build_report({stress, morph, morph2}, SynthConfig{});
  CHECK(r.problems[0].id == "a");
  CHECK(r.overall.problems == 3);
  CHECK(r.overall.exact == doctest::Approx(2.5 / 3));
  REQUIRE(r.overall.chrf);
  CHECK(*r.overall.chrf == doctest::Approx(0.6));
  CHECK_FALSE(r.by_category.at("stress").chrf);
  CHECK(r.by_category.at("morphophonology").exact == doctest::Approx(0.75));
}

TEST_CASE("report checks catch inconsistent cells") {
  ProblemReport p;
  p.id = "x";
  CellPrediction c;
  c.predicted = words("a");
  c.gold = words("a");
  c.correct = true;
  p.cells.push_back(c);
  p.exact = 1.0;
  auto r = build_report({p}, SynthConfig{});
  CHECK_NOTHROW(check_report(r));
  r.problems[0].exact = 0.0;
  CHECK_THROWS_AS(check_report(r), std::logic_error);
  r.problems[0].exact = 1.0;
  r.problems[0].cells[0].gold = words("b");
  CHECK_THROWS_AS(check_report(r), std::logic_error);
}

TEST_CASE("solving a problem predicts every test cell") {
  auto p = load_problem(fixture("umlaut.json"));
  auto rep = solve_problem(p, SynthConfig::for_variant(Variant::kFeature));
  REQUIRE(rep.cells.size() == p.test_cells.size());
  std::vector<bool> correct;
  for (const auto& c : rep.cells) {
    CHECK(c.source == std::optional<std::size_t>{0});
    REQUIRE(c.chrf);
    correct.push_back(c.correct);
  }
  CHECK(rep.exact == exact_score(correct));
  CHECK(rep.exact == 1.0);
  CHECK(rep.mean_rules_per_pair() > 0.0);
  CHECK_NOTHROW(check_report(build_report({rep}, SynthConfig::for_variant(Variant::kFeature))));
}

TEST_CASE("stress problems are scored without chrF") {
  auto p = load_problem(fixture("aleut_stress.json"));
  auto rep = solve_problem(p, SynthConfig::for_variant(Variant::kFeature));
  CHECK_FALSE(rep.chrf);
  for (const auto& c : rep.cells) CHECK_FALSE(c.chrf);
}

TEST_CASE("a row with nothing to translate from is flagged") {
  auto doc = R"({"id": "lonely", "languages": ["X"], "families": ["X"], "category": "morphophonology",
    "columns": ["A", "B", "C"], "features": {"a": {}, "b": {}},
    "matrix": [["a b", "a b", null], [null, "b a", "b a"], ["a a", null, null]],
    "test_cells": [{"row": 2, "col": 2, "gold": "a a"}]})";
  auto p = parse_problem(doc);
  auto rep = solve_problem(p, SynthConfig{});
  REQUIRE(rep.cells.size() == 1);
  CHECK(rep.cells[0].no_source);
  CHECK_FALSE(rep.cells[0].correct);
  CHECK(rep.exact == 0.0);
  auto json = nlohmann::json::parse(report_to_json(build_report({rep}, SynthConfig{})));
  auto cell = json["problems"]["lonely"]["cells"][0];
  CHECK(cell["predicted"].is_null());
  CHECK(cell["flag"] == "no usable source column");
}

TEST_CASE("lazy training predicts the same cells") {
  auto p = load_problem(fixture("somali.json"));
  auto cfg = SynthConfig::for_variant(Variant::kFeature);
  auto eager = solve_problem(p, cfg);
  auto lazy = solve_problem(p, cfg, SolveOptions{true, false, false, false});
  REQUIRE(eager.cells.size() == lazy.cells.size());
  for (std::size_t i = 0; i < eager.cells.size(); ++i) {
    CHECK(eager.cells[i].predicted.to_string() == lazy.cells[i].predicted.to_string());
  }
  CHECK(lazy.programs.size() <= eager.programs.size());
}

TEST_CASE("the command line reports errors through exit codes") {
  CHECK(cli({"solve", "--problems", "/nonexistent/dir"}) == 1);
  CHECK(cli({"solve", "--problems", PHONOSYNTH_FIXTURES, "--variant", "bogus"}) == 1);
  CHECK(cli({"solve"}) == 1);
  CHECK(cli({"solve", "--problems", PHONOSYNTH_FIXTURES, "--window", "1"}) == 1);

  auto bad = scratch_dir("bad");
  std::ofstream(bad / "broken.json") << "{ not json";
  CHECK(cli({"solve", "--problems", bad.string()}) == 1);

  auto dup = scratch_dir("dup");
  std::filesystem::copy_file(fixture("copy.json"), dup / "a.json");
  std::filesystem::copy_file(fixture("copy.json"), dup / "b.json");
  CHECK(cli({"solve", "--problems", dup.string()}) == 1);
}

TEST_CASE("the command line writes a deterministic report") {
  auto dir = scratch_dir("ok");
  std::filesystem::copy_file(fixture("copy.json"), dir / "copy.json");
  std::filesystem::copy_file(fixture("somali.json"), dir / "somali.json");
  std::string a, b;
  REQUIRE(cli({"solve", "--problems", dir.string(), "--seed", "7"}, &a) == 0);
  REQUIRE(cli({"solve", "--problems", dir.string(), "--seed", "7"}, &b) == 0);
  CHECK(a == b);
  auto j = nlohmann::json::parse(a);
  CHECK(j["variant"] == "feature");
  CHECK(j["config"]["seed"] == 7);
  CHECK(j["problems"]["copy"]["exact"] == 1.0);
  CHECK(j["aggregates"]["overall"]["problems"] == 2);

  auto path = dir / "report.json";
  REQUIRE(cli({"solve", "--problems", dir.string(), "--seed", "7", "--report", path.string()}) == 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == a);
}
