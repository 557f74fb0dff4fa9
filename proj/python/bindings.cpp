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


// Python bindings. Words cross the boundary as space-separated strings and
// feature tables as {symbol: {feature: bool}} dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "phonosynth/core.hpp"
#include "phonosynth/dsl.hpp"
#include "phonosynth/harness.hpp"
#include "phonosynth/metrics.hpp"
#include "phonosynth/ndsyn.hpp"
#include "phonosynth/synth.hpp"

namespace py = pybind11;
using namespace phonosynth;

namespace {

using FeatureDict = std::map<std::string, FeatureMap>;

// Symbols absent from `features` enter the table with no features.
FeatureTable table_from(const FeatureDict& features, const std::vector<std::string>& words) {
  FeatureTable t(features);
  for (const auto& w : words) {
    std::istringstream in(w);
    for (std::string s; in >> s;) {
      if (!t.contains(s)) t.set(s, {});
    }
  }
  return t;
}

SynthConfig config(const std::string& variant, std::uint64_t seed, std::size_t max_passes) {
  SynthConfig cfg = SynthConfig::for_variant(variant_from_string(variant));
  cfg.seed = seed;
  cfg.max_passes = max_passes;
  cfg.validate();
  return cfg;
}

std::string run_text(const std::string& program, const std::string& word, const FeatureDict& features) {
  FeatureTable t = table_from(features, {word});
  return run_program(parse_program(program), tokenize(word, t), t).to_string();
}

py::dict synthesize(const std::vector<std::pair<std::string, std::string>>& pairs, const FeatureDict& features,
                    const std::string& variant, std::uint64_t seed, std::size_t max_passes, bool stress) {
  std::vector<std::string> all;
  for (const auto& [s, g] : pairs) {
    all.push_back(s);
    all.push_back(g);
  }
  FeatureTable t = table_from(features, all);
  std::vector<TrainingPair> training;
  for (const auto& [s, g] : pairs) training.push_back(TrainingPair{tokenize(s, t), tokenize(g, t)});
  SynthesisResult res;
  {
    py::gil_scoped_release release;
    res = synthesize_program(training, stress ? ExampleMode::kPositional : ExampleMode::kAligned, t,
                             config(variant, seed, max_passes));
  }
  py::dict out;
  out["program"] = pretty_print(res.program);
  out["passes"] = res.program.passes.size();
  out["solved"] = res.pair_solved;
  out["score"] = res.score;
  return out;
}

std::string solve_dir(const std::string& problems, const std::string& variant, std::uint64_t seed) {
  std::ostringstream out;
  std::ostringstream err;
  int rc;
  {
    py::gil_scoped_release release;
    rc = run_cli({"solve", "--problems", problems, "--variant", variant, "--seed", std::to_string(seed)}, out, err);
  }
  if (rc != 0) throw std::runtime_error(err.str());
  return out.str();
}

py::tuple cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  int rc;
  {
    py::gil_scoped_release release;
    rc = run_cli(args, out, err);
  }
  return py::make_tuple(rc, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_phonosynth, m) {
  m.doc() = "Phonological rule synthesis from word pairs";
  py::register_exception<ProgramSyntaxError>(m, "ProgramSyntaxError", PyExc_ValueError);
  py::register_exception<IngestError>(m, "IngestError", PyExc_ValueError);

  m.def("format_program", [](const std::string& text) { return pretty_print(parse_program(text)); },
        py::arg("text"), "Parses a program and prints it in canonical form.");
  m.def("run_program", &run_text, py::arg("program"), py::arg("word"), py::arg("features") = FeatureDict{},
        "Applies a program to a space-separated word.");
  m.def("synthesize", &synthesize, py::arg("pairs"), py::arg("features") = FeatureDict{},
        py::arg("variant") = "feature", py::arg("seed") = 0, py::arg("max_passes") = 5, py::arg("stress") = false,
        "Learns a program mapping each source word to its target.");
  m.def("solve", &solve_dir, py::arg("problems"), py::arg("variant") = "feature", py::arg("seed") = 0,
        "Solves every problem file in a directory and returns the JSON report.");
  m.def(
      "chrf",
      [](const std::string& pred, const std::string& gold, std::size_t max_n, double beta) {
        FeatureTable t = table_from({}, {pred, gold});
        return chrf(tokenize(pred, t), tokenize(gold, t), max_n, beta);
      },
      py::arg("pred"), py::arg("gold"), py::arg("max_n") = 3, py::arg("beta") = 3.0);
  m.def("run_cli", &cli, py::arg("args"), "Runs the command line; returns (exit code, stdout, stderr).");
}
