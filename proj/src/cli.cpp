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


#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "CLI11.hpp"
#include "phonosynth/harness.hpp"

namespace phonosynth {

namespace {

struct CliOptions {
  std::string problems;
  std::string variant = "feature";
  std::uint64_t seed = 0;
  std::size_t max_passes = 5;
  std::size_t top_k = 10;
  std::string window = "3,3";
  std::string report;
  bool emit_program = false;
  bool trace_passes = false;
  bool dump_alignments = false;
  bool lazy = false;
};

std::pair<int, int> parse_window(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("--window", "expected L,R");
  try {
    std::size_t used_l = 0;
    std::size_t used_r = 0;
    std::string l = text.substr(0, comma);
    std::string r = text.substr(comma + 1);
    int left = std::stoi(l, &used_l);
    int right = std::stoi(r, &used_r);
    if (used_l != l.size() || used_r != r.size() || left < 0 || right < 0) throw std::invalid_argument(text);
    return {left, right};
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--window", "expected two non-negative integers L,R");
  }
}

std::vector<Problem> load_directory(const std::string& dir, std::ostream& err, bool& ok) {
  namespace fs = std::filesystem;
  std::vector<Problem> out;
  ok = true;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    err << "error: " << dir << " is not a directory\n";
    ok = false;
    return out;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::set<std::string> ids;
  for (const auto& f : files) {
    try {
      Problem p = load_problem(f.string());
      if (!ids.insert(p.id).second) throw StructureError("duplicate problem id '" + p.id + "'");
      out.push_back(std::move(p));
    } catch (const IngestError& e) {
      err << "error: " << f.string() << ": " << e.what() << "\n";
      ok = false;
    }
  }
  if (ok && out.empty()) {
    err << "error: no problem files in " << dir << "\n";
    ok = false;
  }
  return out;
}

int solve(const CliOptions& o, std::ostream& out, std::ostream& err) {
  SynthConfig cfg;
  try {
    cfg = SynthConfig::for_variant(variant_from_string(o.variant));
    cfg.seed = o.seed;
    cfg.max_passes = o.max_passes;
    cfg.top_k = o.top_k;
    auto [l, r] = parse_window(o.window);
    cfg.window_left = l;
    cfg.window_right = r;
    cfg.validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  bool ok = true;
  std::vector<Problem> problems = load_directory(o.problems, err, ok);
  if (!ok) return 1;

  SolveOptions options;
  options.lazy = o.lazy;
  options.trace_passes = o.trace_passes;
  options.dump_alignments = o.dump_alignments;

  PredictionReport report;
  try {
    std::vector<ProblemReport> solved;
    for (const auto& p : problems) solved.push_back(solve_problem(p, cfg, options));
    report = build_report(std::move(solved), cfg);
    check_report(report);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }

  for (const auto& p : problems) {
    for (const auto& s : p.feature_table.missing_lookups()) {
      err << "warning: " << p.id << ": symbol '" << s << "' has no feature entry\n";
    }
  }
  for (const auto& p : report.problems) out << p.diagnostics;
  if (o.emit_program) {
    for (const auto& p : report.problems) {
      for (const auto& pp : p.programs) {
        out << "== " << p.id << ": " << p.columns[pp.source] << " -> " << p.columns[pp.target] << " ("
            << pp.result.solved_count() << "/" << pp.rows.size() << " training rows) ==\n"
            << pretty_print(pp.result.program) << "\n";
      }
    }
  }
  std::string json = report_to_json(report);
  if (o.report.empty()) {
    out << json;
  } else {
    std::ofstream f(o.report, std::ios::binary);
    if (!f || !(f << json)) {
      err << "error: cannot write " << o.report << "\n";
      return 1;
    }
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learn rewrite-rule programs for Olympiad-style problem matrices", "phonosynth"};
  app.require_subcommand(1);
  CliOptions o;
  auto* cmd = app.add_subcommand("solve", "Solve every problem file in a directory");
  cmd->add_option("--problems", o.problems, "Directory of problem JSON files")->required();
  cmd->add_option("--variant", o.variant, "nofeature, token or feature")
      ->check(CLI::IsMember({"nofeature", "token", "feature"}));
  cmd->add_option("--seed", o.seed, "Sampling seed");
  cmd->add_option("--max-passes", o.max_passes, "Passes per program")->check(CLI::PositiveNumber);
  cmd->add_option("--top-k", o.top_k, "Candidate rules kept per sampled example")->check(CLI::PositiveNumber);
  cmd->add_option("--window", o.window, "Predicate offsets L,R");
  cmd->add_option("--report", o.report, "Write the JSON report here instead of stdout");
  cmd->add_flag("--emit-program", o.emit_program, "Print the program of every column pair");
  cmd->add_flag("--trace-passes", o.trace_passes, "Print sampled examples and selected rules per pass");
  cmd->add_flag("--dump-alignments", o.dump_alignments, "Print the training alignments");
  cmd->add_flag("--lazy", o.lazy, "Train only the column pairs test cells need");

  // The vector overload consumes arguments from the back.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (*cmd) err << cmd->help();
    return 1;
  }
  return solve(o, out, err);
}

}  // namespace phonosynth
