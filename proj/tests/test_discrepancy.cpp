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

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "tokfit/discrepancy.hpp"
#include "tokfit/ingest.hpp"
#include "tokfit/synth.hpp"

namespace tokfit {
namespace {

using testing::TempDir;

RunData small_run(bool with_discrepancy = false) {
  CohortSpec spec;
  spec.n_seeds = 1;
  spec.n_sentences = 6;
  spec.with_discrepancy = with_discrepancy;
  return gen_cohort_runs(spec).front();
}

std::vector<ProbPair> pairs_for(const RunData& run, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> micro(0, 1000000);
  std::vector<ProbPair> out;
  for (const OccurrenceMeta& o : run.occurrences) {
    out.push_back({o.sentence_id, o.position, micro(rng) / 1e6, micro(rng) / 1e6});
  }
  return out;
}

TEST(Discrepancy, Examples) {
  EXPECT_DOUBLE_EQ(compute_discrepancy({0, 0, 0.9, 0.2}), 0.7);
  EXPECT_DOUBLE_EQ(compute_discrepancy({0, 0, 0.2, 0.9}), 0.7);
  EXPECT_EQ(compute_discrepancy({0, 0, 0.5, 0.5}), 0.0);
  EXPECT_EQ(compute_discrepancy({0, 0, 1.0, 0.0}), 1.0);
  EXPECT_THROW(compute_discrepancy({0, 0, 1.5, 0.0}), DataError);
  EXPECT_THROW(compute_discrepancy({0, 0, 0.5, -0.1}), DataError);
  EXPECT_THROW(compute_discrepancy({0, 0, std::nan(""), 0.1}), DataError);
}

TEST(Discrepancy, SymmetricBoundedAndZeroOnlyWhenEqual) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng);
    const double b = i % 10 == 0 ? a : u(rng);
    const double d = compute_discrepancy({0, 0, a, b});
    EXPECT_EQ(d, compute_discrepancy({0, 0, b, a}));
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 1.0);
    EXPECT_EQ(d == 0.0, a == b);
  }
}

TEST(AnnotateRun, FillsEveryOccurrenceAndRoundTrips) {
  const RunData run = small_run();
  ASSERT_FALSE(run.manifest.has_discrepancy);
  const auto pairs = pairs_for(run, 5);
  const RunData annotated = annotate_run(run, pairs);
  EXPECT_TRUE(annotated.manifest.has_discrepancy);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    ASSERT_TRUE(annotated.occurrences[i].discrepancy.has_value());
    EXPECT_NEAR(*annotated.occurrences[i].discrepancy, std::abs(pairs[i].p_full - pairs[i].p_local), 5e-7);
  }
  TempDir tmp;
  write_run(annotated, tmp.path());
  const RunData loaded = load_run(tmp.path());
  EXPECT_EQ(loaded, annotated);
}

TEST(AnnotateRun, OrderOfPairsIsIrrelevant) {
  const RunData run = small_run();
  auto pairs = pairs_for(run, 9);
  const RunData a = annotate_run(run, pairs);
  std::mt19937_64 rng(3);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  EXPECT_EQ(annotate_run(run, pairs), a);
}

TEST(AnnotateRun, MissingPairIsReported) {
  const RunData run = small_run();
  auto pairs = pairs_for(run, 1);
  const ProbPair dropped = pairs[3];
  pairs.erase(pairs.begin() + 3);
  try {
    annotate_run(run, pairs);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("missing"), std::string::npos);
    EXPECT_NE(msg.find(to_string(dropped.id())), std::string::npos) << msg;
  }
}

TEST(AnnotateRun, SurplusAndDuplicatePairsAreErrors) {
  const RunData run = small_run();
  auto pairs = pairs_for(run, 2);
  auto surplus = pairs;
  surplus.push_back({999, 0, 0.1, 0.2});
  EXPECT_THROW(annotate_run(run, surplus), DataError);
  auto dup = pairs;
  dup.push_back(pairs.front());
  EXPECT_THROW(annotate_run(run, dup), DataError);
}

TEST(AnnotateRun, EmptyRunWithNoPairsIsUnchanged) {
  RunData empty;
  EXPECT_EQ(annotate_run(empty, {}), empty);
}

TEST(ProbPairs, FileRoundTripAndOrdering) {
  const RunData run = small_run();
  const auto pairs = pairs_for(run, 4);
  TempDir tmp;
  write_probpairs(pairs, tmp / "probpairs.tsv");
  const auto loaded = load_probpairs(tmp / "probpairs.tsv");
  ASSERT_EQ(loaded.size(), pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    EXPECT_EQ(loaded[i].id(), pairs[i].id());
    EXPECT_EQ(loaded[i].p_full, pairs[i].p_full);
    EXPECT_EQ(loaded[i].p_local, pairs[i].p_local);
  }

  testing::spit(tmp / "bad.tsv", "sentence_id\tposition\tp_full\tp_local\n0\t1\t0.5\t0.5\n0\t0\t0.5\t0.5\n");
  EXPECT_THROW(load_probpairs(tmp / "bad.tsv"), DataError);
  testing::spit(tmp / "range.tsv", "sentence_id\tposition\tp_full\tp_local\n0\t0\t1.5\t0.5\n");
  EXPECT_THROW(load_probpairs(tmp / "range.tsv"), DataError);
}

}  // namespace
}  // namespace tokfit
