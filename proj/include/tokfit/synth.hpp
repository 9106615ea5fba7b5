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

// Synthetic trajectories and run cohorts with planted best-fit epochs, used
// as ground truth for the analysis pipeline. Not a model of real training.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "tokfit/curves.hpp"
#include "tokfit/error.hpp"
#include "tokfit/grouping.hpp"
#include "tokfit/ingest.hpp"

namespace tokfit {

/// Loss profile around the planted minimum m, as a function of epoch index i.
enum class CurveShape {
  /// sqrt(|i - m| / D), D = distance from m to the farther window edge. The
  /// edge-to-minimum drop is exactly `depth` and neighbours of the minimum sit
  /// depth/sqrt(D) above it, so the minimum survives moderate noise.
  Cusp,
  /// ((i - m) / K)^2. Flat-bottomed: neighbours differ by depth/K^2.
  Quadratic,
};

struct CurveSpec {
  std::size_t k_epochs = 20;
  std::size_t true_min_index = 10;  // 1-based
  double depth = 1.0;
  double noise_sigma = 0.0;
  std::uint64_t rng_seed = 0;
  CurveShape shape = CurveShape::Cusp;
  double acc_peak = 60.0;       // accuracy at the noiseless minimum, percent
  double acc_span = 20.0;       // accuracy lost from minimum to farthest edge
  double acc_noise_sigma = 0.0;
};

namespace detail {

inline void check_curve_spec(std::size_t k, std::size_t m, double depth) {
  if (k < 2) throw ConfigError("synthetic curve needs k_epochs >= 2");
  if (m < 1 || m > k) {
    throw ConfigError("true_min_index " + std::to_string(m) + " outside 1.." + std::to_string(k));
  }
  if (!(depth > 0.0)) throw ConfigError("synthetic curve depth must be positive");
}

/// Shape term in [0, 1] at 1-based index i for minimum m in a window of k.
inline double shape_term(CurveShape shape, std::size_t i, std::size_t m, std::size_t k) {
  const double dist = std::abs(static_cast<double>(i) - static_cast<double>(m));
  if (shape == CurveShape::Quadratic) {
    return (dist / static_cast<double>(k)) * (dist / static_cast<double>(k));
  }
  const double far = static_cast<double>(std::max(m - 1, k - m));
  return std::sqrt(dist / far);
}

}  // namespace detail

/// loss[i] = depth + depth * shape(i) + N(0, noise_sigma), clipped at 0;
/// accuracy = acc_peak - acc_span * shape(i) + N(0, acc_noise_sigma), clipped
/// to [0, 100]. Deterministic in rng_seed.
inline GroupCurve gen_curve(const CurveSpec& spec) {
  detail::check_curve_spec(spec.k_epochs, spec.true_min_index, spec.depth);
  if (spec.noise_sigma < 0.0 || spec.acc_noise_sigma < 0.0) {
    throw ConfigError("synthetic noise levels must be non-negative");
  }
  std::mt19937_64 rng(spec.rng_seed);
  std::normal_distribution<double> loss_noise(0.0, 1.0);
  std::normal_distribution<double> acc_noise(0.0, 1.0);

  GroupCurve curve;
  curve.n_occurrences = 1;
  curve.mean_loss.reserve(spec.k_epochs);
  curve.accuracy.reserve(spec.k_epochs);
  for (std::size_t i = 1; i <= spec.k_epochs; ++i) {
    const double f = detail::shape_term(spec.shape, i, spec.true_min_index, spec.k_epochs);
    const double loss = spec.depth + spec.depth * f + spec.noise_sigma * loss_noise(rng);
    const double acc = spec.acc_peak - spec.acc_span * f + spec.acc_noise_sigma * acc_noise(rng);
    curve.mean_loss.push_back(std::max(0.0, loss));
    curve.accuracy.push_back(std::clamp(acc, 0.0, 100.0));
  }
  return curve;
}

struct CohortSpec {
  std::size_t n_seeds = 40;
  std::int64_t offset_bias = 0;
  double noise_sigma = 0.05;   // per-occurrence loss noise
  double jitter_sigma = 1.0;   // per-seed spread of the planted minimum, epochs
  std::size_t k_epochs = 20;
  std::size_t early_stop_index = 10;
  std::size_t vocab_size = 200;
  std::size_t n_sentences = 60;
  std::size_t min_length = 4;
  std::size_t max_length = 30;
  double zipf_exponent = 1.0;
  double depth = 1.0;
  std::uint64_t base_seed = 1;
  bool with_discrepancy = true;
  CurveShape shape = CurveShape::Cusp;
};

namespace detail {

inline void check_cohort_spec(const CohortSpec& spec) {
  if (spec.n_seeds < 1) throw ConfigError("n_seeds must be at least 1");
  if (spec.early_stop_index < 1 || spec.early_stop_index > spec.k_epochs) {
    throw ConfigError("early_stop_index must lie in 1..k_epochs");
  }
  detail::check_curve_spec(spec.k_epochs, spec.early_stop_index, spec.depth);
  if (spec.vocab_size < 20) throw ConfigError("vocab_size must be at least 20");
  if (spec.n_sentences < 3) throw ConfigError("n_sentences must be at least 3");
  if (spec.min_length < 1 || spec.max_length < spec.min_length) {
    throw ConfigError("sentence length range must satisfy 1 <= min_length <= max_length");
  }
  if (spec.noise_sigma < 0.0 || spec.jitter_sigma < 0.0) {
    throw ConfigError("noise_sigma and jitter_sigma must be non-negative");
  }
}

/// Vocabulary, tags and validation occurrences shared by every seed.
inline RunData gen_cohort_skeleton(const CohortSpec& spec) {
  std::seed_seq seq{spec.base_seed, std::uint64_t{0x5eed}};
  std::mt19937_64 rng(seq);
  RunData run;

  std::vector<double> weights(spec.vocab_size);
  double weight_sum = 0.0;
  for (std::size_t r = 0; r < spec.vocab_size; ++r) {
    weights[r] = 1.0 / std::pow(static_cast<double>(r + 1), spec.zipf_exponent);
    weight_sum += weights[r];
  }

  // The most frequent types are closed-class; the rest draw open-class tags.
  static constexpr const char* kClosed[] = {"PUNCT", "DET", "ADP", "CCONJ", "PRON",
                                            "AUX",   "PART", "SCONJ", "DET", "ADP"};
  static constexpr const char* kOpen[] = {"NOUN", "NOUN", "NOUN", "PROPN", "VERB", "VERB",
                                          "ADJ",  "ADV",  "NUM",  "SYM",   "INTJ", "NOUN"};
  std::uniform_int_distribution<std::size_t> open_tag(0, std::size(kOpen) - 1);
  std::vector<std::string> tags(spec.vocab_size);
  constexpr double kTrainTokens = 1e6;
  for (std::size_t r = 0; r < spec.vocab_size; ++r) {
    TokenMeta t;
    t.token_id = static_cast<std::int64_t>(r);
    t.surface = "tok" + std::to_string(r);
    t.train_count = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::llround(kTrainTokens * weights[r] / weight_sum)));
    run.vocab.push_back(std::move(t));
    tags[r] = r < std::size(kClosed) ? kClosed[r] : kOpen[open_tag(rng)];
  }

  std::discrete_distribution<std::size_t> draw_token(weights.begin(), weights.end());
  std::uniform_int_distribution<std::size_t> draw_len(spec.min_length, spec.max_length);
  std::uniform_real_distribution<double> draw_disc(0.0, 1.0);
  for (std::size_t s = 0; s < spec.n_sentences; ++s) {
    const std::size_t len = draw_len(rng);
    for (std::size_t p = 0; p < len; ++p) {
      const std::size_t tok = draw_token(rng);
      OccurrenceMeta o;
      o.sentence_id = static_cast<std::int64_t>(s);
      o.position = static_cast<std::int64_t>(p);
      o.token_id = static_cast<std::int64_t>(tok);
      o.pos_tag = tags[tok];
      o.pos_group = pos_group(o.pos_tag);
      o.sentence_length = static_cast<std::int64_t>(len);
      // Quantised to the on-disk precision so in-memory and loaded runs agree.
      if (spec.with_discrepancy) o.discrepancy = std::round(draw_disc(rng) * 1e6) / 1e6;
      run.occurrences.push_back(std::move(o));
    }
  }

  run.manifest.vocab_size = static_cast<std::int64_t>(spec.vocab_size);
  run.manifest.n_valid_sentences = static_cast<std::int64_t>(spec.n_sentences);
  run.manifest.has_discrepancy = spec.with_discrepancy;
  run.manifest.vocab_sha256 = sha256_hex(vocab_tsv(run.vocab));
  return run;
}

inline double quantize6(double v) { return std::round(v * 1e6) / 1e6; }

}  // namespace detail

/// Planted minimum (1-based window index) for one seed of a cohort.
inline std::size_t planted_min_index(const CohortSpec& spec, std::mt19937_64& rng) {
  const auto k = static_cast<std::int64_t>(spec.k_epochs);
  const auto s = static_cast<std::int64_t>(spec.early_stop_index);
  std::normal_distribution<double> jitter(0.0, 1.0);
  // Symmetric clamp so an unbiased cohort stays unbiased.
  const std::int64_t reach = std::min(s - 1, k - s);
  auto j = static_cast<std::int64_t>(std::llround(spec.jitter_sigma * jitter(rng)));
  j = std::clamp(j, -reach, reach);
  return static_cast<std::size_t>(std::clamp(s + spec.offset_bias + j, std::int64_t{1}, k));
}

/// In-memory cohort: seeds 1..n_seeds over a shared vocabulary and
/// validation set. Every occurrence of seed i follows the same loss profile
/// with its minimum at early_stop + offset_bias + jitter_i, plus independent
/// per-occurrence noise.
inline std::vector<RunData> gen_cohort_runs(const CohortSpec& spec) {
  detail::check_cohort_spec(spec);
  const RunData skeleton = detail::gen_cohort_skeleton(spec);
  const std::size_t n_occ = skeleton.occurrences.size();
  const std::size_t k = spec.k_epochs;

  std::vector<RunData> runs;
  runs.reserve(spec.n_seeds);
  for (std::size_t seed = 1; seed <= spec.n_seeds; ++seed) {
    std::seed_seq seq{spec.base_seed, std::uint64_t{seed}};
    std::mt19937_64 rng(seq);
    RunData run = skeleton;
    char id[32];
    std::snprintf(id, sizeof id, "synth_seed%03zu", seed);
    run.manifest.run_id = id;
    run.manifest.seed = static_cast<std::int64_t>(seed);

    // Early stop lands on a different absolute epoch for every seed.
    std::uniform_int_distribution<std::int64_t> stop_epoch(
        static_cast<std::int64_t>(spec.early_stop_index) + 5,
        static_cast<std::int64_t>(spec.early_stop_index) + 25);
    const std::int64_t es = stop_epoch(rng);
    const std::int64_t first = es - static_cast<std::int64_t>(spec.early_stop_index - 1);
    for (std::size_t i = 0; i < k; ++i) {
      run.manifest.epochs_logged.push_back(first + static_cast<std::int64_t>(i));
    }
    run.manifest.early_stop_epoch = es;

    const std::size_t m = planted_min_index(spec, rng);
    std::vector<double> profile(k);
    for (std::size_t i = 1; i <= k; ++i) profile[i - 1] = detail::shape_term(spec.shape, i, m, k);

    std::uniform_real_distribution<double> draw_base(0.5, 3.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> base(n_occ);
    for (double& b : base) b = draw_base(rng);

    run.records.resize(k);
    for (std::size_t e = 0; e < k; ++e) {
      EpochRecords& rec = run.records[e];
      rec.epoch = run.manifest.epochs_logged[e];
      rec.loss.resize(n_occ);
      rec.correct.resize(n_occ);
      for (std::size_t o = 0; o < n_occ; ++o) {
        const double clean = base[o] + spec.depth * profile[e];
        rec.loss[o] = detail::quantize6(std::max(0.0, clean + spec.noise_sigma * noise(rng)));
        // Saturating affine map of the noiseless loss to a hit probability.
        const double p_hit = std::clamp(1.1 - 0.35 * clean, 0.02, 0.98);
        rec.correct[o] = unit(rng) < p_hit ? 1 : 0;
      }
    }
    runs.push_back(std::move(run));
  }
  return runs;
}

/// Writes gen_cohort_runs(spec) below `out_dir` as run_seed<NNN> directories.
inline std::vector<fs::path> gen_cohort(const CohortSpec& spec, const fs::path& out_dir) {
  std::vector<fs::path> dirs;
  for (const RunData& run : gen_cohort_runs(spec)) {
    char name[32];
    std::snprintf(name, sizeof name, "run_seed%03lld", static_cast<long long>(run.manifest.seed));
    const fs::path dir = out_dir / name;
    write_run(run, dir);
    dirs.push_back(dir);
  }
  return dirs;
}

}  // namespace tokfit
