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

// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "tokfit/tokfit.hpp"

namespace {

using namespace tokfit;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome exact_sign_test() {
  std::vector<std::int64_t> offsets(39, 3);
  offsets.push_back(-2);
  const auto t0 = Clock::now();
  const SignTestResult r = sign_test(offsets, 0.05);
  const double elapsed = seconds_since(t0);
  const double exact = std::ldexp(82.0, -40);
  const double rel = std::abs(r.p_two_sided - exact) / exact;
  const bool pass = rel <= 1e-3 && elapsed < 1e-3 && r.n_pos == 39 && r.n_neg == 1 && r.rejected();
  return {pass, fmt("p=%.6e (exact %.6e, rel err %.1e), %.3f ms", r.p_two_sided, exact, rel, elapsed * 1e3)};
}

Outcome oracle_recovery() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<std::size_t> pick(1, 20);
  const CheckpointWindow window = CheckpointWindow::uniform(20, 10);
  int hits = 0;
  constexpr int kCurves = 1000;
  for (int i = 0; i < kCurves; ++i) {
    CurveSpec spec;
    spec.true_min_index = pick(rng);
    spec.noise_sigma = 0.05 * spec.depth;
    spec.rng_seed = rng();
    const FitResult fit = fitting_offset(gen_curve(spec), window);
    hits += fit.fitting_offset == static_cast<std::int64_t>(spec.true_min_index) - 10;
  }
  int censored = 0;
  int boundary = 0;
  for (std::size_t m : {std::size_t{1}, std::size_t{20}}) {
    for (CurveShape shape : {CurveShape::Cusp, CurveShape::Quadratic}) {
      CurveSpec spec;
      spec.true_min_index = m;
      spec.shape = shape;
      ++boundary;
      censored += fitting_offset(gen_curve(spec), window).censored;
    }
  }
  const double elapsed = seconds_since(t0);
  const double rate = static_cast<double>(hits) / kCurves;
  const bool pass = rate >= 0.95 && censored == boundary && elapsed < 5.0;
  return {pass, fmt("recovered %d/%d (%.1f%%), boundary censored %d/%d, %.2f s", hits, kCurves, 100 * rate,
                    censored, boundary, elapsed)};
}

Outcome calibration() {
  const auto t0 = Clock::now();
  constexpr int kCohorts = 100;
  int rejections = 0;
  AnalysisOptions opts;
  opts.group_by = {Factor::Freq};
  for (int c = 0; c < kCohorts; ++c) {
    CohortSpec spec;
    spec.n_seeds = 40;
    spec.offset_bias = 0;
    spec.base_seed = 1000 + static_cast<std::uint64_t>(c);
    const auto runs = gen_cohort_runs(spec);
    const auto reports = analyze_cohort(runs, opts);
    const GroupRow& low = reports.front().rows.back();
    rejections += !low.degenerate && low.sign.rejected();
  }
  const double elapsed = seconds_since(t0);
  const double rate = static_cast<double>(rejections) / kCohorts;
  const double se = std::sqrt(0.05 * 0.95 / kCohorts);
  const bool pass = std::abs(rate - 0.05) <= 3 * se && elapsed < 30.0;
  return {pass, fmt("rejection rate %.3f (allowed 0.050 +/- %.4f), %.2f s", rate, 3 * se, elapsed)};
}

Outcome brute_force_equivalence() {
  std::mt19937_64 rng(99);
  int matches = 0;
  constexpr int kCurves = 100;
  for (int i = 0; i < kCurves; ++i) {
    const std::size_t k = 2 + rng() % 29;
    const std::size_t s = 1 + rng() % k;
    // Coarse values force frequent ties.
    std::uniform_int_distribution<int> level(0, 4 + static_cast<int>(rng() % 20));
    std::uniform_real_distribution<double> acc(0.0, 100.0);
    GroupCurve curve;
    for (std::size_t e = 0; e < k; ++e) {
      curve.mean_loss.push_back(0.25 * level(rng));
      curve.accuracy.push_back(acc(rng));
    }
    const FitResult fit = potential_gain(curve, CheckpointWindow::uniform(k, s));
    const auto oracle = testing::exhaustive_scan(curve.mean_loss, curve.accuracy, s);
    matches += fit.best_fit_index == oracle.best && fit.fitting_offset == oracle.offset &&
               fit.censored == oracle.censored && fit.potential_gain == oracle.gain;
  }
  return {matches == kCurves, fmt("%d/%d curves match the exhaustive scan", matches, kCurves)};
}

Outcome grouping_partitions() {
  std::mt19937_64 rng(555);
  std::string worst;
  bool ok = true;

  // Frequency buckets over Zipfian vocabularies.
  for (std::size_t n_types : {1000, 2500, 5000, 10000}) {
    for (double a : {0.8, 1.0, 1.2}) {
      const auto counts = testing::zipf_counts(n_types, a, rng);
      std::vector<TokenMeta> vocab;
      std::int64_t total = 0;
      std::int64_t max_count = 0;
      for (std::size_t t = 0; t < n_types; ++t) {
        vocab.push_back({static_cast<std::int64_t>(t), "t" + std::to_string(t), counts[t]});
        total += counts[t];
        max_count = std::max(max_count, counts[t]);
      }
      const auto bucket = frequency_buckets(vocab, 3);
      std::int64_t mass[3] = {0, 0, 0};
      for (const TokenMeta& t : vocab) mass[bucket.at(t.token_id)] += t.train_count;
      for (std::int64_t m : mass) {
        const double dev = std::abs(static_cast<double>(m) - static_cast<double>(total) / 3.0);
        if (dev > static_cast<double>(max_count)) {
          ok = false;
          worst = fmt("freq bucket off by %.0f (> %lld) at %zu types", dev, static_cast<long long>(max_count),
                      n_types);
        }
      }
    }
  }

  // Discrepancy and length buckets.
  for (int trial = 0; trial < 200 && ok; ++trial) {
    std::vector<OccurrenceMeta> occ;
    const int n_sent = 3 + static_cast<int>(rng() % 60);
    std::uniform_int_distribution<int> len_dist(1, 40);
    std::uniform_int_distribution<int> d_level(0, 50);
    for (int sid = 0; sid < n_sent; ++sid) {
      const int len = len_dist(rng);
      for (int p = 0; p < len; ++p) {
        OccurrenceMeta o;
        o.sentence_id = sid;
        o.position = p;
        o.sentence_length = len;
        o.pos_tag = "NOUN";
        o.discrepancy = d_level(rng) / 50.0;
        occ.push_back(o);
      }
    }
    std::size_t dc[3] = {0, 0, 0};
    for (std::size_t b : discrepancy_buckets(occ, 3)) ++dc[b];
    const auto lb = length_buckets(sentence_lengths(occ), 3);
    std::size_t lc[3] = {0, 0, 0};
    for (const auto& [sid, b] : lb) ++lc[b];
    const auto spread = [](const std::size_t* c) {
      return *std::max_element(c, c + 3) - *std::min_element(c, c + 3);
    };
    if (spread(dc) > 1 || spread(lc) > 1) {
      ok = false;
      worst = fmt("bucket counts %zu/%zu/%zu (disc), %zu/%zu/%zu (len)", dc[0], dc[1], dc[2], lc[0], lc[1],
                  lc[2]);
    }
  }

  // POS table.
  const std::map<std::string, PosGroup> table{
      {"NOUN", PosGroup::Noun}, {"PRON", PosGroup::Noun},  {"PROPN", PosGroup::Noun},
      {"VERB", PosGroup::Verb}, {"AUX", PosGroup::Verb},   {"ADJ", PosGroup::Adj},
      {"ADV", PosGroup::Adj},   {"NUM", PosGroup::Num},    {"ADP", PosGroup::Func},
      {"CONJ", PosGroup::Func}, {"CCONJ", PosGroup::Func}, {"DET", PosGroup::Func},
      {"PART", PosGroup::Func}, {"SCONJ", PosGroup::Func}, {"PUNCT", PosGroup::Symb},
      {"SYM", PosGroup::Symb}};
  int tag_hits = 0;
  for (const auto& [tag, group] : table) tag_hits += pos_group(tag) == group;
  for (const char* other : {"INTJ", "X", "SPACE", ""}) tag_hits += pos_group(other) == PosGroup::Other ? 0 : -100;
  if (tag_hits != static_cast<int>(table.size())) {
    ok = false;
    worst = "POS table mismatch";
  }
  return {ok, ok ? fmt("12 Zipf vocabularies balanced, 200 disc/len partitions within 1, %zu tags mapped",
                       table.size())
                 : worst};
}

Outcome determinism() {
  testing::TempDir tmp;
  CohortSpec spec;
  spec.n_seeds = 10;
  spec.n_sentences = 30;
  spec.offset_bias = 2;
  gen_cohort(spec, tmp / "cohort");
  std::vector<std::vector<std::pair<std::string, std::string>>> snaps;
  for (const char* out : {"a", "b"}) {
    cli::AnalysisConfig cfg;
    cfg.cohort_dirs = {tmp / "cohort"};
    cfg.options.group_by = {Factor::Freq, Factor::Pos, Factor::Disc, Factor::Len};
    cfg.options.cross = {{Factor::Freq, Factor::Pos}};
    cfg.formats = {ReportFormat::Tsv, ReportFormat::Json};
    cfg.out_dir = tmp / out;
    cli::cmd_analyze(cfg);
    snaps.push_back(testing::snapshot(tmp / out));
  }
  const bool pass = !snaps[0].empty() && snaps[0] == snaps[1];
  return {pass, fmt("%zu report files, byte-identical: %s", snaps[0].size(), pass ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"exact sign test", exact_sign_test},
      {"oracle recovery", oracle_recovery},
      {"calibration", calibration},
      {"brute-force equivalence", brute_force_equivalence},
      {"grouping partitions", grouping_partitions},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
