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

// Prediction discrepancy of a reference token: how much its probability
// changes between a decoder that sees the whole target prefix and one that
// sees only the previous target token (both see the source),
//
//   D = |p_full - p_local|.
//
// A large D marks a token whose prediction leans on long-range context.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tokfit/error.hpp"
#include "tokfit/grouping.hpp"
#include "tokfit/ingest.hpp"

namespace tokfit {

struct ProbPair {
  std::int64_t sentence_id = 0;
  std::int64_t position = 0;
  double p_full = 0.0;
  double p_local = 0.0;

  [[nodiscard]] OccurrenceId id() const { return {sentence_id, position}; }
  bool operator==(const ProbPair&) const = default;
};

inline constexpr std::string_view kProbPairsHeader = "sentence_id\tposition\tp_full\tp_local";

inline double compute_discrepancy(const ProbPair& pair) {
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in_unit(pair.p_full) || !in_unit(pair.p_local)) {
    throw DataError("probability pair at " + to_string(pair.id()) + " outside [0, 1] (p_full=" +
                    std::to_string(pair.p_full) + ", p_local=" + std::to_string(pair.p_local) + ")");
  }
  return std::abs(pair.p_full - pair.p_local);
}

/// Fills every occurrence's discrepancy from `pairs`, which must cover the
/// occurrence set exactly. Pair order is irrelevant.
inline RunData annotate_run(RunData run, std::span<const ProbPair> pairs) {
  if (run.occurrences.empty() && pairs.empty()) return run;

  std::map<OccurrenceId, double> by_id;
  for (const ProbPair& p : pairs) {
    // Stored at the on-disk precision so an annotated run equals its reload.
    const double d = std::round(compute_discrepancy(p) * 1e6) / 1e6;
    if (!by_id.emplace(p.id(), d).second) {
      throw DataError("duplicate probability pair for " + to_string(p.id()));
    }
  }

  std::vector<OccurrenceId> missing;
  for (OccurrenceMeta& o : run.occurrences) {
    auto it = by_id.find(o.id());
    if (it == by_id.end()) {
      missing.push_back(o.id());
      continue;
    }
    o.discrepancy = it->second;
    by_id.erase(it);
  }
  if (!missing.empty() || !by_id.empty()) {
    std::string msg = "probability pairs do not cover run '" + run.manifest.run_id + "' exactly";
    constexpr std::size_t kListed = 10;
    auto list = [&](std::string_view what, const auto& ids, auto&& get) {
      if (ids.empty()) return;
      msg += "; " + std::string(what) + ":";
      std::size_t n = 0;
      for (const auto& item : ids) {
        if (n++ == kListed) {
          msg += " ... (" + std::to_string(ids.size()) + " total)";
          break;
        }
        msg += " " + to_string(get(item));
      }
    };
    list("missing", missing, [](const OccurrenceId& id) { return id; });
    list("surplus", by_id, [](const auto& kv) { return kv.first; });
    throw DataError(msg);
  }
  run.manifest.has_discrepancy = true;
  return run;
}

inline std::string probpairs_tsv(std::span<const ProbPair> pairs) {
  std::string out(kProbPairsHeader);
  out += '\n';
  for (const ProbPair& p : pairs) {
    out += std::to_string(p.sentence_id) + '\t' + std::to_string(p.position) + '\t' +
           detail::fixed6(p.p_full) + '\t' + detail::fixed6(p.p_local) + '\n';
  }
  return out;
}

inline void write_probpairs(std::span<const ProbPair> pairs, const fs::path& path) {
  detail::write_file(path, probpairs_tsv(pairs));
}

/// Reads probpairs.tsv; rows must be in (sentence_id, position) order.
inline std::vector<ProbPair> load_probpairs(const fs::path& path) {
  detail::Table t = detail::read_table(path, kProbPairsHeader);
  std::vector<ProbPair> out;
  out.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    ProbPair p;
    p.sentence_id = detail::parse_int(t, r, 0, "sentence_id");
    p.position = detail::parse_int(t, r, 1, "position");
    p.p_full = detail::parse_real(t, r, 2, "p_full");
    p.p_local = detail::parse_real(t, r, 3, "p_local");
    if (!out.empty() && !(out.back().id() < p.id())) {
      throw DataError(path.string() + ":" + std::to_string(t.line_numbers[r]) + ": row " +
                      to_string(p.id()) + " is out of (sentence_id, position) order or duplicated");
    }
    for (double v : {p.p_full, p.p_local}) {
      if (v < 0.0 || v > 1.0) {
        throw DataError(path.string() + ":" + std::to_string(t.line_numbers[r]) +
                        ": probability outside [0, 1]");
      }
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace tokfit
