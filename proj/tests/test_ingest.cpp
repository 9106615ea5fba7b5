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

#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "tokfit/ingest.hpp"
#include "tokfit/synth.hpp"

namespace tokfit {
namespace {

using testing::slurp;
using testing::snapshot;
using testing::spit;
using testing::TempDir;

/// One sentence of three tokens, logged at two epochs.
RunData minimal_run(std::int64_t seed = 1) {
  RunData run;
  run.manifest.run_id = "mini" + std::to_string(seed);
  run.manifest.seed = seed;
  run.manifest.epochs_logged = {4, 5};
  run.manifest.early_stop_epoch = 4;
  run.manifest.vocab_size = 3;
  run.manifest.n_valid_sentences = 1;
  run.vocab = {{0, "the", 50}, {1, "cat", 7}, {2, ".", 40}};
  const char* tags[] = {"DET", "NOUN", "PUNCT"};
  for (std::int64_t p = 0; p < 3; ++p) {
    OccurrenceMeta o;
    o.sentence_id = 0;
    o.position = p;
    o.token_id = p;
    o.pos_tag = tags[p];
    o.pos_group = pos_group(o.pos_tag);
    o.sentence_length = 3;
    run.occurrences.push_back(o);
  }
  run.records = {{4, {0.5, 2.25, 0.125}, {1, 0, 1}}, {5, {0.4, 2.0, 0.1}, {1, 1, 1}}};
  return run;
}

std::string error_of(const fs::path& dir) {
  try {
    load_run(dir);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

TEST(LoadRun, MinimalFixture) {
  TempDir tmp;
  write_run(minimal_run(), tmp.path());
  const RunData run = load_run(tmp.path());
  EXPECT_EQ(run.occurrences.size(), 3u);
  ASSERT_EQ(run.records.size(), 2u);
  std::size_t n_records = 0;
  for (const auto& r : run.records) n_records += r.loss.size();
  EXPECT_EQ(n_records, 6u);
  EXPECT_EQ(run.occurrences[1].pos_group, PosGroup::Noun);
  EXPECT_EQ(run.records[0].loss[1], 2.25);
  EXPECT_EQ(run.manifest.window().early_stop_index(), 1u);
  EXPECT_EQ(slurp(tmp / "vocab.tsv"), "token_id\tsurface\ttrain_count\n0\tthe\t50\n1\tcat\t7\n2\t.\t40\n");
  EXPECT_EQ(slurp(tmp / "epoch_5.tsv"),
            "sentence_id\tposition\tloss\tcorrect\n0\t0\t0.400000\t1\n0\t1\t2.000000\t1\n0\t2\t0.100000\t1\n");
}

TEST(LoadRun, MissingEpochFileNamesEpoch) {
  TempDir tmp;
  write_run(minimal_run(), tmp.path());
  fs::remove(tmp / "epoch_5.tsv");
  const std::string msg = error_of(tmp.path());
  EXPECT_NE(msg.find("epoch 5"), std::string::npos) << msg;
}

TEST(LoadRun, RowCountMismatchNamesFileAndCounts) {
  TempDir tmp;
  write_run(minimal_run(), tmp.path());
  spit(tmp / "epoch_4.tsv", "sentence_id\tposition\tloss\tcorrect\n0\t0\t0.500000\t1\n");
  const std::string msg = error_of(tmp.path());
  EXPECT_NE(msg.find("epoch_4.tsv"), std::string::npos) << msg;
  EXPECT_NE(msg.find("expected 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("found 1"), std::string::npos) << msg;
}

TEST(LoadRun, MalformedNumberNamesFileLineColumn) {
  TempDir tmp;
  write_run(minimal_run(), tmp.path());
  std::string text = slurp(tmp / "epoch_4.tsv");
  text.replace(text.find("2.250000"), 8, "2.2x0000");
  spit(tmp / "epoch_4.tsv", text);
  const std::string msg = error_of(tmp.path());
  EXPECT_NE(msg.find("epoch_4.tsv:3: column 3 (loss)"), std::string::npos) << msg;
}

TEST(LoadRun, DiscrepancyColumnMustMatchManifest) {
  TempDir tmp;
  RunData run = minimal_run();
  write_run(run, tmp.path());
  std::string manifest = slurp(tmp / "manifest.json");
  manifest.replace(manifest.find("\"has_discrepancy\": false"), 24, "\"has_discrepancy\": true");
  spit(tmp / "manifest.json", manifest);
  const std::string msg = error_of(tmp.path());
  EXPECT_NE(msg.find("has_discrepancy"), std::string::npos) << msg;
}

TEST(LoadRun, VocabHashMismatch) {
  TempDir tmp;
  write_run(minimal_run(), tmp.path());
  spit(tmp / "vocab.tsv", "token_id\tsurface\ttrain_count\n0\tthe\t51\n1\tcat\t7\n2\t.\t40\n");
  EXPECT_NE(error_of(tmp.path()).find("SHA-256"), std::string::npos);
}

TEST(LoadRun, FormattingRules) {
  TempDir tmp;
  write_run(minimal_run(), tmp.path());
  const std::string good = slurp(tmp / "occurrences.tsv");

  std::string crlf = good;
  crlf.insert(crlf.find('\n'), "\r");
  spit(tmp / "occurrences.tsv", crlf);
  EXPECT_NE(error_of(tmp.path()).find("CR"), std::string::npos);

  spit(tmp / "occurrences.tsv", good.substr(0, good.size() - 1));
  EXPECT_NE(error_of(tmp.path()).find("LF"), std::string::npos);

  std::string trailing = good;
  trailing.insert(trailing.size() - 1, " ");
  spit(tmp / "occurrences.tsv", trailing);
  EXPECT_NE(error_of(tmp.path()).find("trailing whitespace"), std::string::npos);

  spit(tmp / "occurrences.tsv",
       "sentence_id\tposition\ttoken_id\tpos_tag\tsentence_length\tdiscrepancy\n"
       "0\t1\t1\tNOUN\t3\tNA\n0\t0\t0\tDET\t3\tNA\n0\t2\t2\tPUNCT\t3\tNA\n");
  EXPECT_NE(error_of(tmp.path()).find("order"), std::string::npos);
}

TEST(WriteRun, RoundTripIsByteIdentical) {
  TempDir a, b;
  CohortSpec spec;
  spec.n_seeds = 1;
  spec.n_sentences = 8;
  const RunData original = gen_cohort_runs(spec).front();
  write_run(original, a.path());
  const RunData loaded = load_run(a.path());
  EXPECT_EQ(loaded, original);
  write_run(loaded, b.path());
  EXPECT_EQ(snapshot(a.path()), snapshot(b.path()));
  // Loading twice yields equal structures.
  EXPECT_EQ(load_run(a.path()), loaded);
}

TEST(LoadRun, FuzzedFilesNeverYieldInvalidRuns) {
  TempDir tmp;
  write_run(minimal_run(), tmp.path());
  const std::vector<std::string> files{"manifest.json", "vocab.tsv", "occurrences.tsv", "epoch_4.tsv",
                                       "epoch_5.tsv"};
  std::vector<std::string> originals;
  for (const auto& f : files) originals.push_back(slurp(tmp / f));
  std::mt19937_64 rng(1234);
  const std::string alphabet = "0123456789.-\t\n aNAx{}\":,e";
  int accepted = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const std::size_t fi = rng() % files.size();
    std::string text = originals[fi];
    const int edits = 1 + static_cast<int>(rng() % 3);
    for (int e = 0; e < edits && !text.empty(); ++e) {
      const std::size_t pos = rng() % text.size();
      switch (rng() % 3) {
        case 0: text[pos] = alphabet[rng() % alphabet.size()]; break;
        case 1: text.erase(pos, 1); break;
        default: text.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
      }
    }
    spit(tmp / files[fi], text);
    try {
      const RunData run = load_run(tmp.path());
      EXPECT_NO_THROW(validate_run(run));
      ++accepted;
    } catch (const DataError&) {
    }
    spit(tmp / files[fi], originals[fi]);
  }
  EXPECT_LT(accepted, 600);
}

TEST(LoadCohort, SharedShapeAndUniqueSeeds) {
  TempDir tmp;
  std::vector<fs::path> dirs;
  for (int s = 1; s <= 3; ++s) {
    dirs.push_back(tmp / ("r" + std::to_string(s)));
    write_run(minimal_run(s), dirs.back());
  }
  EXPECT_EQ(load_cohort(dirs).size(), 3u);

  // Directory of runs expands in name order.
  const std::vector<fs::path> parent{tmp.path()};
  EXPECT_EQ(expand_run_dirs(parent), dirs);

  write_run(minimal_run(1), dirs[2]);
  EXPECT_THROW(load_cohort(dirs), CohortError);
}

TEST(LoadCohort, DifferentWindowLengthIsCohortError) {
  TempDir tmp;
  RunData longer = minimal_run(2);
  longer.manifest.epochs_logged.push_back(6);
  longer.records.push_back({6, {0.3, 1.9, 0.1}, {1, 1, 1}});
  write_run(minimal_run(1), tmp / "a");
  write_run(longer, tmp / "b");
  const std::vector<fs::path> dirs{tmp / "a", tmp / "b"};
  EXPECT_THROW(load_cohort(dirs), CohortError);
}

TEST(LoadCohort, VocabularyMismatchIsCohortError) {
  TempDir tmp;
  RunData other = minimal_run(2);
  other.vocab[1].train_count = 8;
  write_run(minimal_run(1), tmp / "a");
  write_run(other, tmp / "b");
  const std::vector<fs::path> dirs{tmp / "a", tmp / "b"};
  EXPECT_THROW(load_cohort(dirs), CohortError);
}

TEST(LoadCohort, FortyRunSyntheticCohort) {
  TempDir tmp;
  CohortSpec spec;
  spec.n_seeds = 40;
  spec.n_sentences = 10;
  const auto dirs = gen_cohort(spec, tmp.path());
  const auto runs = load_cohort(dirs);
  ASSERT_EQ(runs.size(), 40u);
  for (std::size_t i = 0; i < runs.size(); ++i) EXPECT_EQ(runs[i].manifest.seed, static_cast<std::int64_t>(i + 1));
}

}  // namespace
}  // namespace tokfit
