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

// Bucket assignment along the four analysis factors:
//
//   freq  token types split into bands of roughly equal training mass
//   pos   universal POS tags folded into six coarse groups (+ Other)
//   disc  occurrences split into equal-count terciles of discrepancy
//   len   sentences split into equal-count terciles of target length
//
// Every assignment is a total partition of its domain. Bucket indices are
// 0-based; index 0 is High / Big / Short.

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tokfit/error.hpp"
#include "tokfit/group_key.hpp"

namespace tokfit {

struct TokenMeta {
  std::int64_t token_id = 0;
  std::string surface;
  std::int64_t train_count = 0;

  bool operator==(const TokenMeta&) const = default;
};

struct OccurrenceId {
  std::int64_t sentence_id = 0;
  std::int64_t position = 0;

  auto operator<=>(const OccurrenceId&) const = default;
};

inline std::string to_string(const OccurrenceId& id) {
  return "(sentence " + std::to_string(id.sentence_id) + ", position " +
         std::to_string(id.position) + ")";
}

struct OccurrenceMeta {
  std::int64_t sentence_id = 0;
  std::int64_t position = 0;
  std::int64_t token_id = 0;
  std::string pos_tag;
  PosGroup pos_group = PosGroup::Other;
  std::int64_t sentence_length = 1;
  std::optional<double> discrepancy;

  [[nodiscard]] OccurrenceId id() const { return {sentence_id, position}; }
  bool operator==(const OccurrenceMeta&) const = default;
};

/// One factor's bucket index for every element of its domain, in domain order.
struct FactorAssignment {
  Factor factor = Factor::Freq;
  std::vector<std::size_t> bucket;
};

// ---------------------------------------------------------------------------
// Frequency
// ---------------------------------------------------------------------------

/// Greedy balanced-mass split of the vocabulary. Tokens are scanned by
/// descending train_count (ties: ascending token_id); the scan moves on to the
/// next bucket once the cumulative mass reaches i/n of the total. Every bucket
/// ends within one token's mass of total/n.
inline std::map<std::int64_t, std::size_t> frequency_buckets(std::span<const TokenMeta> vocab,
                                                             std::size_t n_buckets = 3) {
  if (n_buckets < 2) {
    throw ConfigError("frequency bucketing needs at least 2 buckets, got " +
                      std::to_string(n_buckets));
  }
  std::vector<const TokenMeta*> order;
  order.reserve(vocab.size());
  std::int64_t total = 0;
  for (const TokenMeta& t : vocab) {
    if (t.train_count < 0) {
      throw DataError("token " + std::to_string(t.token_id) + " has negative train_count");
    }
    total += t.train_count;
    order.push_back(&t);
  }
  if (total <= 0) {
    throw ConfigError("frequency bucketing needs a positive total train_count");
  }
  std::sort(order.begin(), order.end(), [](const TokenMeta* a, const TokenMeta* b) {
    if (a->train_count != b->train_count) return a->train_count > b->train_count;
    return a->token_id < b->token_id;
  });

  std::map<std::int64_t, std::size_t> out;
  std::size_t bucket = 0;  // 0-based; threshold for bucket i (0-based) is (i+1)/n of total
  std::int64_t cumulative = 0;
  const auto n = static_cast<std::int64_t>(n_buckets);
  for (const TokenMeta* t : order) {
    if (!out.emplace(t->token_id, bucket).second) {
      throw DataError("duplicate token_id " + std::to_string(t->token_id) + " in vocabulary");
    }
    cumulative += t->train_count;
    // cumulative >= (bucket+1) * total / n, kept in integers.
    if (bucket + 1 < n_buckets && cumulative * n >= static_cast<std::int64_t>(bucket + 1) * total) {
      ++bucket;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parts of speech
// ---------------------------------------------------------------------------

/// Coarse group of a universal POS tag. Unlisted tags fall through to Other.
inline PosGroup pos_group(std::string_view tag) {
  struct Entry {
    std::string_view tag;
    PosGroup group;
  };
  static constexpr Entry kTable[] = {
      {"NOUN", PosGroup::Noun},  {"PRON", PosGroup::Noun},  {"PROPN", PosGroup::Noun},
      {"VERB", PosGroup::Verb},  {"AUX", PosGroup::Verb},   {"ADJ", PosGroup::Adj},
      {"ADV", PosGroup::Adj},    {"NUM", PosGroup::Num},    {"ADP", PosGroup::Func},
      {"CONJ", PosGroup::Func},  {"CCONJ", PosGroup::Func}, {"DET", PosGroup::Func},
      {"PART", PosGroup::Func},  {"SCONJ", PosGroup::Func}, {"PUNCT", PosGroup::Symb},
      {"SYM", PosGroup::Symb},
  };
  for (const Entry& e : kTable) {
    if (e.tag == tag) return e.group;
  }
  return PosGroup::Other;
}

/// A tagged word and the positions of the subword tokens it was split into.
struct WordPos {
  std::int64_t sentence_id = 0;
  std::string pos_tag;
  std::vector<std::int64_t> subword_positions;
};

/// Gives every subword occurrence the group of the word covering it.
/// `occurrences` defines the output order; each must be covered exactly once.
inline std::vector<PosGroup> propagate_word_pos(std::span<const WordPos> words,
                                                std::span<const OccurrenceId> occurrences) {
  std::map<OccurrenceId, PosGroup> covered;
  for (const WordPos& w : words) {
    const PosGroup g = pos_group(w.pos_tag);
    for (std::int64_t p : w.subword_positions) {
      const OccurrenceId id{w.sentence_id, p};
      if (!covered.emplace(id, g).second) {
        throw DataError("subword " + to_string(id) + " is aligned to more than one word");
      }
    }
  }
  std::vector<PosGroup> out;
  out.reserve(occurrences.size());
  for (const OccurrenceId& id : occurrences) {
    auto it = covered.find(id);
    if (it == covered.end()) {
      throw DataError("subword " + to_string(id) + " is not covered by any word");
    }
    out.push_back(it->second);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Equal-count splits
// ---------------------------------------------------------------------------

namespace detail {

/// Bucket of rank r when n items are cut into `k` consecutive chunks whose
/// sizes differ by at most one, larger chunks first.
inline std::vector<std::size_t> chunk_by_rank(std::size_t n, std::size_t k) {
  std::vector<std::size_t> out(n);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t r = 0;
  for (std::size_t b = 0; b < k; ++b) {
    const std::size_t size = base + (b < extra ? 1 : 0);
    for (std::size_t i = 0; i < size; ++i) out[r++] = b;
  }
  return out;
}

}  // namespace detail

/// Equal-count split of occurrences by discrepancy, largest values first.
/// Ties are ordered by (sentence_id, position). Returned in input order.
inline std::vector<std::size_t> discrepancy_buckets(std::span<const OccurrenceMeta> occurrences,
                                                    std::size_t n_buckets = 3) {
  if (n_buckets < 1) throw ConfigError("discrepancy bucketing needs at least 1 bucket");
  for (const OccurrenceMeta& o : occurrences) {
    if (!o.discrepancy) {
      throw ConfigError("occurrence " + to_string(o.id()) +
                        " has no discrepancy value; grouping by discrepancy needs runs logged "
                        "with discrepancy (see the annotate command)");
    }
  }
  std::vector<std::size_t> order(occurrences.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const OccurrenceMeta& x = occurrences[a];
    const OccurrenceMeta& y = occurrences[b];
    if (*x.discrepancy != *y.discrepancy) return *x.discrepancy > *y.discrepancy;
    return x.id() < y.id();
  });
  const std::vector<std::size_t> by_rank = detail::chunk_by_rank(order.size(), n_buckets);
  std::vector<std::size_t> out(occurrences.size());
  for (std::size_t r = 0; r < order.size(); ++r) out[order[r]] = by_rank[r];
  return out;
}

struct SentenceLength {
  std::int64_t sentence_id = 0;
  std::int64_t length = 0;
};

/// Distinct sentences of an occurrence list with their target lengths.
inline std::vector<SentenceLength> sentence_lengths(std::span<const OccurrenceMeta> occurrences) {
  std::map<std::int64_t, std::int64_t> lengths;
  for (const OccurrenceMeta& o : occurrences) {
    auto [it, inserted] = lengths.emplace(o.sentence_id, o.sentence_length);
    if (!inserted && it->second != o.sentence_length) {
      throw DataError("sentence " + std::to_string(o.sentence_id) +
                      " has inconsistent sentence_length (" + std::to_string(it->second) +
                      " vs " + std::to_string(o.sentence_length) + ")");
    }
  }
  std::vector<SentenceLength> out;
  out.reserve(lengths.size());
  for (auto [id, len] : lengths) out.push_back({id, len});
  return out;
}

/// Equal-count split of sentences by length, shortest first. Sentences of
/// equal length are ordered by sentence_id, so lower ids land in the lower
/// bucket when a tie straddles a boundary.
inline std::map<std::int64_t, std::size_t> length_buckets(std::span<const SentenceLength> sentences,
                                                          std::size_t n_buckets = 3) {
  if (n_buckets < 1 || sentences.size() < n_buckets) {
    throw ConfigError("length bucketing needs at least " + std::to_string(n_buckets) +
                      " sentences, got " + std::to_string(sentences.size()));
  }
  std::vector<SentenceLength> sorted(sentences.begin(), sentences.end());
  std::sort(sorted.begin(), sorted.end(), [](const SentenceLength& a, const SentenceLength& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.sentence_id < b.sentence_id;
  });
  const std::vector<std::size_t> by_rank = detail::chunk_by_rank(sorted.size(), n_buckets);
  std::map<std::int64_t, std::size_t> out;
  for (std::size_t r = 0; r < sorted.size(); ++r) {
    if (!out.emplace(sorted[r].sentence_id, by_rank[r]).second) {
      throw DataError("duplicate sentence_id " + std::to_string(sorted[r].sentence_id));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Occurrence-level assignments
// ---------------------------------------------------------------------------

inline FactorAssignment assign_frequency(std::span<const OccurrenceMeta> occurrences,
                                         const std::map<std::int64_t, std::size_t>& token_bucket) {
  FactorAssignment a{Factor::Freq, {}};
  a.bucket.reserve(occurrences.size());
  for (const OccurrenceMeta& o : occurrences) {
    auto it = token_bucket.find(o.token_id);
    if (it == token_bucket.end()) {
      throw DataError("occurrence " + to_string(o.id()) + " refers to unknown token_id " +
                      std::to_string(o.token_id));
    }
    a.bucket.push_back(it->second);
  }
  return a;
}

inline FactorAssignment assign_pos(std::span<const OccurrenceMeta> occurrences) {
  FactorAssignment a{Factor::Pos, {}};
  a.bucket.reserve(occurrences.size());
  for (const OccurrenceMeta& o : occurrences) a.bucket.push_back(static_cast<std::size_t>(o.pos_group));
  return a;
}

inline FactorAssignment assign_discrepancy(std::span<const OccurrenceMeta> occurrences) {
  return {Factor::Disc, discrepancy_buckets(occurrences, 3)};
}

inline FactorAssignment assign_length(std::span<const OccurrenceMeta> occurrences) {
  const std::vector<SentenceLength> sentences = sentence_lengths(occurrences);
  const std::map<std::int64_t, std::size_t> by_sentence = length_buckets(sentences, 3);
  FactorAssignment a{Factor::Len, {}};
  a.bucket.reserve(occurrences.size());
  for (const OccurrenceMeta& o : occurrences) a.bucket.push_back(by_sentence.at(o.sentence_id));
  return a;
}

/// Single-factor keys for one assignment.
inline std::vector<GroupKey> single_group(const FactorAssignment& a) {
  std::vector<GroupKey> out(a.bucket.size());
  for (std::size_t i = 0; i < a.bucket.size(); ++i) out[i].set(a.factor, a.bucket[i]);
  return out;
}

/// Cartesian key per occurrence. Cells with no occurrence simply never appear.
inline std::vector<GroupKey> cross_group(const FactorAssignment& a, const FactorAssignment& b) {
  if (a.factor == b.factor) {
    throw ConfigError("cannot cross factor '" + std::string(to_string(a.factor)) + "' with itself");
  }
  if (a.bucket.size() != b.bucket.size()) {
    throw StructuralError("cross_group: assignments cover " + std::to_string(a.bucket.size()) +
                          " and " + std::to_string(b.bucket.size()) + " occurrences");
  }
  std::vector<GroupKey> out(a.bucket.size());
  for (std::size_t i = 0; i < a.bucket.size(); ++i) {
    out[i].set(a.factor, a.bucket[i]);
    out[i].set(b.factor, b.bucket[i]);
  }
  return out;
}

}  // namespace tokfit
