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

// Cohort analysis: per run, occurrences are grouped, each group's curve is
// fitted, and per-group offsets are pooled across seeds into one report row.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tokfit/curves.hpp"
#include "tokfit/error.hpp"
#include "tokfit/group_key.hpp"
#include "tokfit/grouping.hpp"
#include "tokfit/ingest.hpp"
#include "tokfit/stats.hpp"
#include "tokfit/window.hpp"

namespace tokfit {

struct AnalysisOptions {
  std::vector<Factor> group_by;
  std::vector<std::pair<Factor, Factor>> cross;
  std::optional<WindowShape> window;  // sub-window override, K:S
  double alpha = 0.05;
  bool smooth = false;
};

/// One table row: a group pooled over the cohort.
struct GroupRow {
  GroupKey key;
  std::string label;
  bool present = false;     // false: no occurrence in any run
  std::size_t n_occ = 0;    // occurrences summed over runs
  std::vector<std::int64_t> seeds;
  std::vector<std::int64_t> offsets;
  std::vector<bool> censored;
  std::vector<double> gains;
  std::vector<double> acc_early_stop_per_seed;
  OffsetSummary summary;
  SignTestResult sign;      // counts always filled; p valid unless degenerate
  bool degenerate = false;  // fewer than two seeds, or no non-zero offset
  double acc_early_stop = 0.0;
  double potential_gain = 0.0;
};

struct FactorReport {
  std::string name;  // "freq", "freq_pos", ...
  std::vector<Factor> factors;
  std::vector<GroupRow> rows;
};

namespace detail {

/// Domain of one factor in display order. Other is listed only when used.
inline std::vector<std::size_t> factor_domain(Factor f, bool pos_other_used) {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < factor_arity(f); ++b) {
    if (f == Factor::Pos && static_cast<PosGroup>(b) == PosGroup::Other && !pos_other_used) continue;
    out.push_back(b);
  }
  return out;
}

/// Cartesian cells of a factor list, first factor varying slowest.
inline std::vector<GroupKey> enumerate_cells(std::span<const Factor> factors, bool pos_other_used) {
  std::vector<GroupKey> cells{GroupKey{}};
  for (Factor f : factors) {
    std::vector<GroupKey> next;
    for (const GroupKey& base : cells) {
      for (std::size_t b : factor_domain(f, pos_other_used)) {
        GroupKey k = base;
        k.set(f, b);
        next.push_back(k);
      }
    }
    cells = std::move(next);
  }
  return cells;
}

/// Records and window restricted to the K:S override, or the run's own.
inline std::pair<std::span<const EpochRecords>, CheckpointWindow> select_window(
    const RunData& run, const std::optional<WindowShape>& override_shape) {
  const CheckpointWindow full = run.manifest.window();
  if (!override_shape) return {std::span<const EpochRecords>(run.records), full};
  const WindowShape want = *override_shape;
  const auto s0 = static_cast<std::int64_t>(full.early_stop_index());
  const std::int64_t start = s0 - static_cast<std::int64_t>(want.early_stop_index);  // 0-based
  if (want.k < 2 || want.early_stop_index < 1 || want.early_stop_index > want.k || start < 0 ||
      start + static_cast<std::int64_t>(want.k) > static_cast<std::int64_t>(full.size())) {
    throw ConfigError("window " + std::to_string(want.k) + ":" +
                      std::to_string(want.early_stop_index) + " does not fit run '" +
                      run.manifest.run_id + "' (logged " + std::to_string(full.size()) +
                      " epochs, early stop at " + std::to_string(full.early_stop_index()) + ")");
  }
  const auto first = static_cast<std::size_t>(start);
  std::vector<std::int64_t> epochs(full.epochs().begin() + static_cast<std::ptrdiff_t>(first),
                                   full.epochs().begin() + static_cast<std::ptrdiff_t>(first + want.k));
  return {std::span<const EpochRecords>(run.records).subspan(first, want.k),
          CheckpointWindow(std::move(epochs), want.early_stop_index)};
}

inline double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

inline std::vector<std::pair<std::string, std::vector<Factor>>> report_specs(
    const AnalysisOptions& opts) {
  std::vector<std::pair<std::string, std::vector<Factor>>> out;
  for (Factor f : opts.group_by) out.push_back({std::string(to_string(f)), {f}});
  for (auto [a, b] : opts.cross) {
    if (a == b) {
      throw ConfigError("cannot cross factor '" + std::string(to_string(a)) + "' with itself");
    }
    out.push_back({std::string(to_string(a)) + "_" + std::string(to_string(b)), {a, b}});
  }
  return out;
}

}  // namespace detail

/// Runs every requested grouping over the cohort.
inline std::vector<FactorReport> analyze_cohort(std::span<const RunData> runs,
                                                const AnalysisOptions& opts) {
  if (opts.group_by.empty() && opts.cross.empty()) {
    throw ConfigError("nothing to analyse: give at least one --group-by factor or --cross pair");
  }
  if (!(opts.alpha > 0.0 && opts.alpha < 1.0)) {
    throw ConfigError("alpha must lie in (0, 1)");
  }
  check_cohort(runs);
  const auto specs = detail::report_specs(opts);

  const std::map<std::int64_t, std::size_t> token_bucket = frequency_buckets(runs.front().vocab, 3);
  bool pos_other_used = false;
  for (const RunData& run : runs) {
    for (const OccurrenceMeta& o : run.occurrences) pos_other_used |= o.pos_group == PosGroup::Other;
  }

  std::vector<FactorReport> reports;
  std::vector<std::vector<GroupKey>> cells_per_report;
  for (const auto& [name, factors] : specs) {
    FactorReport r;
    r.name = name;
    r.factors = factors;
    std::vector<GroupKey> cells = detail::enumerate_cells(factors, pos_other_used);
    for (const GroupKey& k : cells) {
      GroupRow row;
      row.key = k;
      row.label = label(k, factors);
      r.rows.push_back(std::move(row));
    }
    reports.push_back(std::move(r));
    cells_per_report.push_back(std::move(cells));
  }

  for (const RunData& run : runs) {
    const auto [records, window] = detail::select_window(run, opts.window);

    std::map<Factor, FactorAssignment> assignments;
    auto assignment_for = [&](Factor f) -> const FactorAssignment& {
      auto it = assignments.find(f);
      if (it != assignments.end()) return it->second;
      FactorAssignment a;
      switch (f) {
        case Factor::Freq: a = assign_frequency(run.occurrences, token_bucket); break;
        case Factor::Pos: a = assign_pos(run.occurrences); break;
        case Factor::Disc: a = assign_discrepancy(run.occurrences); break;
        case Factor::Len: a = assign_length(run.occurrences); break;
      }
      return assignments.emplace(f, std::move(a)).first->second;
    };

    for (std::size_t ri = 0; ri < reports.size(); ++ri) {
      FactorReport& report = reports[ri];
      const std::vector<GroupKey>& cells = cells_per_report[ri];
      std::map<GroupKey, std::size_t> slot_of;
      for (std::size_t c = 0; c < cells.size(); ++c) slot_of.emplace(cells[c], c);

      std::vector<GroupKey> keys;
      if (report.factors.size() == 1) {
        keys = single_group(assignment_for(report.factors[0]));
      } else {
        keys = cross_group(assignment_for(report.factors[0]), assignment_for(report.factors[1]));
      }
      std::vector<std::size_t> slots(keys.size());
      for (std::size_t o = 0; o < keys.size(); ++o) slots[o] = slot_of.at(keys[o]);

      const auto curves = aggregate_curves(records, slots, cells);
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (!curves[c]) continue;
        const FitResult fit =
            potential_gain(opts.smooth ? smoothed(*curves[c]) : *curves[c], window);
        GroupRow& row = report.rows[c];
        row.present = true;
        row.n_occ += curves[c]->n_occurrences;
        row.seeds.push_back(run.manifest.seed);
        row.offsets.push_back(fit.fitting_offset);
        row.censored.push_back(fit.censored);
        row.gains.push_back(fit.potential_gain);
        row.acc_early_stop_per_seed.push_back(fit.acc_at_early_stop);
      }
    }
  }

  for (FactorReport& report : reports) {
    for (GroupRow& row : report.rows) {
      if (!row.present) continue;
      OffsetSample sample{row.key, row.offsets, row.censored};
      row.summary = summarize_offsets(sample);
      row.acc_early_stop = detail::mean_of(row.acc_early_stop_per_seed);
      row.potential_gain = detail::mean_of(row.gains);
      row.sign.reject_at = opts.alpha;
      for (std::int64_t v : row.offsets) {
        row.sign.n_pos += v > 0;
        row.sign.n_neg += v < 0;
        row.sign.n_zero += v == 0;
      }
      if (row.offsets.size() < 2 || row.sign.n_pos + row.sign.n_neg == 0) {
        row.degenerate = true;
        row.sign.p_two_sided = 1.0;
      } else {
        row.sign = sign_test(row.offsets, opts.alpha);
      }
    }
  }
  return reports;
}

}  // namespace tokfit
