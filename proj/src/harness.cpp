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


#include "phonosynth/harness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"
#include "phonosynth/align.hpp"
#include "phonosynth/metrics.hpp"

namespace phonosynth {

double ProblemReport::mean_rules_per_pair() const {
  if (programs.empty()) return 0.0;
  std::size_t total = 0;
  for (const auto& p : programs) total += p.result.program.rule_count();
  return static_cast<double>(total) / static_cast<double>(programs.size());
}

namespace {

struct Trained {
  std::optional<PairProgram> program;
  std::string diagnostics;
};

std::string join_ids(const std::vector<std::size_t>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? "," : "") + std::to_string(ids[i]);
  return out;
}

Trained train_pair(const Problem& problem, const ColumnPairTask& task, const SynthConfig& cfg,
                   const SolveOptions& options) {
  Trained out;
  PairProgram pp;
  pp.source = task.source;
  pp.target = task.target;
  pp.mode = problem.category == Category::kStress ? ExampleMode::kPositional : ExampleMode::kAligned;

  const std::vector<std::vector<Cell>>* matrix = &problem.matrix;
  PremappedMatrix premapped;
  if (problem.category == Category::kTransliteration) {
    premapped = premap_matrix(problem, task.source, task.target, cfg.align);
    pp.premap = premapped.map;
    matrix = &premapped.matrix;
  }

  std::vector<TrainingPair> pairs;
  for (std::size_t r : task.rows) {
    const Word& src = *(*matrix)[r][task.source];
    const Word& tgt = *problem.cell(r, task.target);
    if (pp.mode == ExampleMode::kPositional && src.size() != tgt.size()) continue;
    pp.rows.push_back(r);
    pairs.push_back(TrainingPair{src, tgt});
  }
  if (pairs.empty()) return out;

  std::ostringstream diag;
  const std::string header = problem.id + " " + problem.columns[task.source] + " -> " + problem.columns[task.target];
  if (options.dump_alignments && pp.mode == ExampleMode::kAligned) {
    diag << "# alignments " << header << "\n";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (pairs[i].source.empty() || pairs[i].target.empty()) continue;
      diag << "row " << pp.rows[i] << "\n"
           << format_alignment(pairs[i].source, pairs[i].target,
                               align_pair(pairs[i].source, pairs[i].target, cfg.align));
    }
  }
  pp.result = synthesize_program(pairs, pp.mode, problem.feature_table, cfg);
  if (options.trace_passes) {
    diag << "# passes " << header << "\n";
    for (const auto& t : pp.result.passes) {
      diag << "pass " << t.pass_index + 1 << " sampled [" << join_ids(t.sampled) << "] candidates "
           << t.candidate_count << "\n";
      for (const auto& c : t.selected) {
        diag << "  " << to_text(c.rule.rule) << "  correct=" << c.correct.size()
             << " incorrect=" << c.incorrect.size() << " abstained=" << c.abstained.size() << "\n";
      }
    }
    diag << "training " << pp.result.solved_count() << "/" << pairs.size() << "\n";
  }
  out.diagnostics = diag.str();
  out.program = std::move(pp);
  return out;
}

}  // namespace

ProblemReport solve_problem(const Problem& problem, const SynthConfig& cfg, const SolveOptions& options) {
  cfg.validate();
  ProblemReport report;
  report.id = problem.id;
  report.category = problem.category;
  report.columns = problem.columns;

  std::vector<ColumnPairTask> tasks;
  std::set<std::pair<std::size_t, std::size_t>> needed;
  for (const auto& tc : problem.test_cells) {
    for (std::size_t k = 0; k < problem.cols(); ++k) {
      const auto& c = problem.cell(tc.row, k);
      if (k != tc.col && c && !c->empty()) needed.emplace(k, tc.col);
    }
  }
  for (auto& t : column_pair_tasks(problem)) {
    if (!t.usable()) continue;
    if (options.lazy && !needed.count({t.source, t.target})) continue;
    tasks.push_back(std::move(t));
  }

  std::vector<Trained> trained(tasks.size());
  if (options.parallel && tasks.size() > 1) {
    std::vector<std::future<Trained>> jobs;
    for (const auto& t : tasks) {
      jobs.push_back(std::async(std::launch::async, [&problem, &t, &cfg, &options] {
        return train_pair(problem, t, cfg, options);
      }));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) trained[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < tasks.size(); ++i) trained[i] = train_pair(problem, tasks[i], cfg, options);
  }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> by_pair;
  for (auto& t : trained) {
    report.diagnostics += t.diagnostics;
    if (!t.program) continue;
    by_pair[{t.program->source, t.program->target}] = report.programs.size();
    report.programs.push_back(std::move(*t.program));
  }

  std::vector<bool> correct;
  double chrf_total = 0.0;
  std::vector<TestCell> cells = problem.test_cells;
  std::sort(cells.begin(), cells.end(),
            [](const TestCell& a, const TestCell& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
  for (const auto& tc : cells) {
    CellPrediction cp;
    cp.row = tc.row;
    cp.col = tc.col;
    cp.gold = tc.gold;
    const PairProgram* best = nullptr;
    for (std::size_t k = 0; k < problem.cols(); ++k) {
      const auto& c = problem.cell(tc.row, k);
      if (k == tc.col || !c || c->empty()) continue;
      auto it = by_pair.find({k, tc.col});
      if (it == by_pair.end()) continue;
      const PairProgram& pp = report.programs[it->second];
      if (!best || pp.result.score > best->result.score) best = &pp;
    }
    if (best) {
      cp.source = best->source;
      cp.program = pretty_print(best->result.program);
      Word input = *problem.cell(tc.row, best->source);
      if (!best->premap.empty()) input = apply_translit_map(input, best->premap, problem.feature_table);
      cp.predicted = run_program(best->result.program, input, problem.feature_table);
    } else {
      cp.no_source = true;
    }
    cp.correct = best && same_symbols(cp.predicted, cp.gold);
    if (problem.category != Category::kStress) {
      double v = cp.gold.empty() ? (cp.predicted.empty() ? 1.0 : 0.0) : chrf(cp.predicted, cp.gold);
      cp.chrf = v;
      chrf_total += v;
    }
    correct.push_back(cp.correct);
    report.cells.push_back(std::move(cp));
  }
  report.exact = exact_score(correct);
  if (problem.category != Category::kStress && !report.cells.empty()) {
    report.chrf = chrf_total / static_cast<double>(report.cells.size());
  }
  return report;
}

namespace {

Aggregate aggregate(const std::vector<const ProblemReport*>& problems) {
  Aggregate a;
  a.problems = problems.size();
  double chrf_total = 0.0;
  std::size_t chrf_count = 0;
  for (const auto* p : problems) {
    a.exact += p->exact;
    if (p->chrf) {
      chrf_total += *p->chrf;
      ++chrf_count;
    }
  }
  if (!problems.empty()) a.exact /= static_cast<double>(problems.size());
  if (chrf_count) a.chrf = chrf_total / static_cast<double>(chrf_count);
  return a;
}

}  // namespace

PredictionReport build_report(std::vector<ProblemReport> problems, const SynthConfig& cfg) {
  PredictionReport r;
  r.variant = to_string(cfg.variant);
  r.config = cfg;
  r.problems = std::move(problems);
  std::stable_sort(r.problems.begin(), r.problems.end(),
                   [](const ProblemReport& a, const ProblemReport& b) { return a.id < b.id; });
  std::map<std::string, std::vector<const ProblemReport*>> groups;
  std::vector<const ProblemReport*> all;
  for (const auto& p : r.problems) {
    groups[to_string(p.category)].push_back(&p);
    all.push_back(&p);
  }
  for (const auto& [cat, ps] : groups) r.by_category[cat] = aggregate(ps);
  r.overall = aggregate(all);
  return r;
}

void check_report(const PredictionReport& report) {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  for (const auto& p : report.problems) {
    if (!in_unit(p.exact)) throw std::logic_error(p.id + ": exact score outside [0,1]");
    if (p.chrf && !in_unit(*p.chrf)) throw std::logic_error(p.id + ": chrF outside [0,1]");
    if (p.category == Category::kStress && p.chrf) throw std::logic_error(p.id + ": stress problem carries chrF");
    std::vector<bool> recount;
    for (const auto& c : p.cells) {
      if (c.correct != (!c.no_source && same_symbols(c.predicted, c.gold))) {
        throw std::logic_error(p.id + ": cell correctness does not match its prediction");
      }
      recount.push_back(c.correct);
    }
    if (std::abs(exact_score(recount) - p.exact) > 1e-12) throw std::logic_error(p.id + ": exact score recount differs");
  }
  if (!in_unit(report.overall.exact)) throw std::logic_error("overall exact score outside [0,1]");
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json aggregate_json(const Aggregate& a) {
  ordered_json j;
  j["problems"] = a.problems;
  j["exact"] = a.exact;
  j["chrf"] = a.chrf ? ordered_json(*a.chrf) : ordered_json(nullptr);
  return j;
}

}  // namespace

std::string report_to_json(const PredictionReport& report) {
  ordered_json doc;
  doc["variant"] = report.variant;
  const SynthConfig& c = report.config;
  doc["config"] = {
      {"seed", c.seed},
      {"max_passes", c.max_passes},
      {"top_k", c.top_k},
      {"window", {c.window_left, c.window_right}},
      {"samples_per_iteration", c.samples_per_iteration},
      {"max_guard_depth", c.max_guard_depth},
      {"guard_beam", c.guard_beam},
  };
  ordered_json problems = ordered_json::object();
  for (const auto& p : report.problems) {
    ordered_json pj;
    pj["category"] = to_string(p.category);
    pj["exact"] = p.exact;
    pj["chrf"] = p.chrf ? ordered_json(*p.chrf) : ordered_json(nullptr);
    ordered_json cells = ordered_json::array();
    for (const auto& cell : p.cells) {
      ordered_json cj;
      cj["row"] = cell.row;
      cj["column"] = p.columns[cell.col];
      cj["predicted"] = cell.no_source ? ordered_json(nullptr) : ordered_json(cell.predicted.to_string());
      cj["gold"] = cell.gold.to_string();
      cj["correct"] = cell.correct;
      cj["chrf"] = cell.chrf ? ordered_json(*cell.chrf) : ordered_json(nullptr);
      cj["source_column"] = cell.source ? ordered_json(p.columns[*cell.source]) : ordered_json(nullptr);
      cj["program"] = cell.source ? ordered_json(cell.program) : ordered_json(nullptr);
      if (cell.no_source) cj["flag"] = "no usable source column";
      cells.push_back(std::move(cj));
    }
    pj["cells"] = std::move(cells);
    ordered_json training = ordered_json::array();
    for (const auto& pp : p.programs) {
      ordered_json tj;
      tj["source"] = p.columns[pp.source];
      tj["target"] = p.columns[pp.target];
      tj["rows"] = pp.rows;
      tj["solved"] = pp.result.solved_count();
      tj["passes"] = pp.result.program.passes.size();
      tj["rules"] = pp.result.program.rule_count();
      tj["score"] = pp.result.score;
      training.push_back(std::move(tj));
    }
    pj["training"] = std::move(training);
    problems[p.id] = std::move(pj);
  }
  doc["problems"] = std::move(problems);
  ordered_json cats = ordered_json::object();
  for (const auto& [cat, a] : report.by_category) cats[cat] = aggregate_json(a);
  doc["aggregates"] = {{"overall", aggregate_json(report.overall)}, {"by_category", std::move(cats)}};
  return doc.dump(2) + "\n";
}

}  // namespace phonosynth
