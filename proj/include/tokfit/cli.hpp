// Copyright 2026 The tokfit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The tokfit command line:
//
//   tokfit analyze  [RUN_OR_COHORT_DIR...] [--config FILE] [--group-by F,...]
//                   [--cross A:B]... [--alpha A] [--window K:S] [--smooth]
//                   [--out DIR] [--format tsv,json,svg]
//   tokfit validate RUN_DIR...
//   tokfit synth    SPEC_FILE [--out DIR]
//   tokfit annotate RUN_DIR PROBPAIRS_TSV [--out DIR]
//
// Exit status: 0 success, 1 data error, 2 usage error.

#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tokfit/analysis.hpp"
#include "tokfit/config.hpp"
#include "tokfit/discrepancy.hpp"
#include "tokfit/error.hpp"
#include "tokfit/ingest.hpp"
#include "tokfit/report.hpp"
#include "tokfit/synth.hpp"

namespace tokfit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

/// Fully resolved `analyze` settings.
struct AnalysisConfig {
  std::vector<fs::path> cohort_dirs;
  AnalysisOptions options;
  fs::path out_dir = "tokfit_report";
  std::set<ReportFormat> formats{ReportFormat::Tsv, ReportFormat::Json, ReportFormat::Svg};
};

/// Raw `analyze` inputs before config-file merging; empty means "not given".
struct AnalyzeArgs {
  std::vector<std::string> runs;
  std::string config_file;
  std::vector<std::string> group_by;
  std::vector<std::string> cross;
  std::string alpha;
  std::string window;
  bool smooth = false;
  std::string out;
  std::vector<std::string> format;
};

/// Merges the config file (if any) with flags; flags win.
inline AnalysisConfig resolve_analysis_config(const AnalyzeArgs& args) {
  std::map<std::string, std::string> kv;
  if (!args.config_file.empty()) kv = read_key_values(args.config_file);
  for (const auto& [key, value] : kv) {
    static const std::set<std::string> kKnown{"runs",   "group_by", "cross", "alpha",
                                              "window", "smooth",   "out",   "format"};
    if (!kKnown.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  auto pick_list = [&](const std::vector<std::string>& flag, const char* key) {
    std::vector<std::string> out;
    if (!flag.empty()) {
      for (const std::string& f : flag) {
        for (std::string& piece : split_list(f)) out.push_back(std::move(piece));
      }
    } else if (kv.contains(key)) {
      out = split_list(kv.at(key));
    }
    return out;
  };
  auto pick = [&](const std::string& flag, const char* key) {
    if (!flag.empty()) return flag;
    auto it = kv.find(key);
    return it == kv.end() ? std::string() : it->second;
  };

  AnalysisConfig cfg;
  for (const std::string& r : pick_list(args.runs, "runs")) cfg.cohort_dirs.emplace_back(r);
  for (const std::string& f : pick_list(args.group_by, "group_by")) {
    cfg.options.group_by.push_back(parse_factor(f));
  }
  for (const std::string& c : pick_list(args.cross, "cross")) cfg.options.cross.push_back(parse_cross(c));
  if (const std::string a = pick(args.alpha, "alpha"); !a.empty()) {
    cfg.options.alpha = parse_number<double>(a, "alpha");
  }
  if (const std::string w = pick(args.window, "window"); !w.empty()) {
    cfg.options.window = parse_window(w);
  }
  cfg.options.smooth = args.smooth || (kv.contains("smooth") && parse_bool(kv.at("smooth"), "smooth"));
  if (const std::string o = pick(args.out, "out"); !o.empty()) cfg.out_dir = o;
  if (const std::vector<std::string> f = pick_list(args.format, "format"); !f.empty()) {
    cfg.formats.clear();
    for (const std::string& s : f) cfg.formats.insert(parse_format(s));
  }

  if (cfg.cohort_dirs.empty()) throw ConfigError("no run directories given");
  if (cfg.options.group_by.empty() && cfg.options.cross.empty()) {
    throw ConfigError("nothing to analyse: give --group-by and/or --cross");
  }
  if (!(cfg.options.alpha > 0.0 && cfg.options.alpha < 1.0)) {
    throw ConfigError("alpha must lie in (0, 1)");
  }
  return cfg;
}

/// Loads the cohort, analyses it and writes the reports.
inline std::vector<fs::path> cmd_analyze(const AnalysisConfig& cfg) {
  const std::vector<fs::path> dirs = expand_run_dirs(cfg.cohort_dirs);
  const std::vector<RunData> runs = load_cohort(dirs);
  const std::vector<FactorReport> reports = analyze_cohort(runs, cfg.options);
  ReportContext ctx;
  ctx.n_runs = runs.size();
  ctx.window = cfg.options.window.value_or(window_shape(runs.front()));
  ctx.alpha = cfg.options.alpha;
  ctx.smooth = cfg.options.smooth;
  return write_reports(reports, ctx, cfg.out_dir, cfg.formats);
}

/// Runs the command line; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Token-level fitting diagnostics for sequence-to-sequence training runs", "tokfit"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "Group tokens, fit offsets and gains, sign-test across seeds");
  analyze_cmd->add_option("runs", analyze.runs, "Run directories or directories of runs");
  analyze_cmd->add_option("--config", analyze.config_file, "key = value config file; flags override it");
  analyze_cmd->add_option("--group-by", analyze.group_by, "Factors: freq,pos,disc,len");
  analyze_cmd->add_option("--cross", analyze.cross, "Factor pair a:b (repeatable)");
  analyze_cmd->add_option("--alpha", analyze.alpha, "Significance level (default 0.05)");
  analyze_cmd->add_option("--window", analyze.window, "Analysis window K:S inside the logged epochs");
  analyze_cmd->add_flag("--smooth", analyze.smooth, "3-point moving average of loss curves before argmin");
  analyze_cmd->add_option("--out", analyze.out, "Output directory (default tokfit_report)");
  analyze_cmd->add_option("--format", analyze.format, "Any of tsv,json,svg (default all)");

  std::vector<std::string> validate_dirs;
  CLI::App* validate_cmd = app.add_subcommand("validate", "Check run directories against the log format");
  validate_cmd->add_option("dirs", validate_dirs, "Run directories")->required();

  std::string synth_spec;
  std::string synth_out;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic cohort with planted best-fit epochs");
  synth_cmd->add_option("spec", synth_spec, "key = value cohort spec file")->required();
  synth_cmd->add_option("--out", synth_out, "Output directory (overrides 'out' in the spec file)");

  std::string annotate_run_dir;
  std::string annotate_pairs;
  std::string annotate_out;
  CLI::App* annotate_cmd = app.add_subcommand("annotate", "Fill discrepancy values from probpairs.tsv");
  annotate_cmd->add_option("run", annotate_run_dir, "Run directory")->required();
  annotate_cmd->add_option("probpairs", annotate_pairs, "probpairs.tsv")->required();
  annotate_cmd->add_option("--out", annotate_out, "Write the annotated run here (default: in place)");

  std::vector<std::string> argv_store{"tokfit"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "tokfit: " << e.what() << "\n";
    if (!app.get_subcommands().empty()) err << app.get_subcommands().front()->help();
    return kExitUsage;
  }

  try {
    if (*analyze_cmd) {
      const AnalysisConfig cfg = resolve_analysis_config(analyze);
      for (const fs::path& p : cmd_analyze(cfg)) out << "wrote " << p.string() << "\n";
    } else if (*validate_cmd) {
      for (const std::string& d : validate_dirs) {
        const RunData run = load_run(d);
        out << "OK " << d << ": " << run.occurrences.size() << " occurrences x "
            << run.records.size() << " epochs\n";
      }
    } else if (*synth_cmd) {
      const auto kv = read_key_values(synth_spec);
      const CohortSpec spec = parse_cohort_spec(kv);
      fs::path out_dir = synth_out;
      if (out_dir.empty()) out_dir = kv.contains("out") ? kv.at("out") : "synth_cohort";
      for (const fs::path& p : gen_cohort(spec, out_dir)) out << "wrote " << p.string() << "\n";
    } else if (*annotate_cmd) {
      RunData run = load_run(annotate_run_dir);
      const std::vector<ProbPair> pairs = load_probpairs(annotate_pairs);
      const fs::path dest = annotate_out.empty() ? fs::path(annotate_run_dir) : fs::path(annotate_out);
      write_run(annotate_run(std::move(run), pairs), dest);
      out << "wrote " << dest.string() << "\n";
    }
  } catch (const ConfigError& e) {
    err << "tokfit: usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "tokfit: error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace tokfit::cli
