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

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tokfit/error.hpp"

namespace tokfit {

enum class FreqBucket { High, Med, Low };
enum class PosGroup { Noun, Verb, Adj, Num, Func, Symb, Other };
enum class DiscBucket { Big, Med, Small };
enum class LenBucket { Short, Medium, Long };

/// The four grouping factors.
enum class Factor { Freq, Pos, Disc, Len };

inline constexpr std::array<FreqBucket, 3> kFreqBuckets{FreqBucket::High, FreqBucket::Med,
                                                        FreqBucket::Low};
inline constexpr std::array<PosGroup, 7> kPosGroups{PosGroup::Noun, PosGroup::Verb, PosGroup::Adj,
                                                    PosGroup::Num,  PosGroup::Func, PosGroup::Symb,
                                                    PosGroup::Other};
inline constexpr std::array<DiscBucket, 3> kDiscBuckets{DiscBucket::Big, DiscBucket::Med,
                                                        DiscBucket::Small};
inline constexpr std::array<LenBucket, 3> kLenBuckets{LenBucket::Short, LenBucket::Medium,
                                                      LenBucket::Long};

constexpr std::string_view to_string(FreqBucket b) {
  constexpr std::array<std::string_view, 3> names{"High", "Med", "Low"};
  return names[static_cast<std::size_t>(b)];
}

constexpr std::string_view to_string(PosGroup g) {
  constexpr std::array<std::string_view, 7> names{"Noun", "Verb", "Adj",  "Num",
                                                  "Func", "Symb", "Other"};
  return names[static_cast<std::size_t>(g)];
}

constexpr std::string_view to_string(DiscBucket b) {
  constexpr std::array<std::string_view, 3> names{"Big", "Med", "Small"};
  return names[static_cast<std::size_t>(b)];
}

constexpr std::string_view to_string(LenBucket b) {
  constexpr std::array<std::string_view, 3> names{"Short", "Medium", "Long"};
  return names[static_cast<std::size_t>(b)];
}

constexpr std::string_view to_string(Factor f) {
  constexpr std::array<std::string_view, 4> names{"freq", "pos", "disc", "len"};
  return names[static_cast<std::size_t>(f)];
}

inline Factor parse_factor(std::string_view name) {
  for (Factor f : {Factor::Freq, Factor::Pos, Factor::Disc, Factor::Len}) {
    if (to_string(f) == name) return f;
  }
  throw ConfigError("unknown grouping factor '" + std::string(name) +
                    "' (expected one of freq, pos, disc, len)");
}

/// Number of buckets a factor can take.
constexpr std::size_t factor_arity(Factor f) {
  return f == Factor::Pos ? kPosGroups.size() : 3;
}

/// A group of occurrences, identified by the value of each factor it is
/// restricted on. Unset factors are unconstrained.
struct GroupKey {
  std::optional<FreqBucket> freq;
  std::optional<PosGroup> pos;
  std::optional<DiscBucket> disc;
  std::optional<LenBucket> len;

  auto operator<=>(const GroupKey&) const = default;

  [[nodiscard]] std::size_t n_factors() const {
    return static_cast<std::size_t>(freq.has_value()) + pos.has_value() + disc.has_value() +
           len.has_value();
  }

  [[nodiscard]] bool has(Factor f) const {
    switch (f) {
      case Factor::Freq: return freq.has_value();
      case Factor::Pos: return pos.has_value();
      case Factor::Disc: return disc.has_value();
      case Factor::Len: return len.has_value();
    }
    return false;
  }

  /// Bucket index of factor `f`; the factor must be set.
  [[nodiscard]] std::size_t index(Factor f) const {
    switch (f) {
      case Factor::Freq: return static_cast<std::size_t>(freq.value());
      case Factor::Pos: return static_cast<std::size_t>(pos.value());
      case Factor::Disc: return static_cast<std::size_t>(disc.value());
      case Factor::Len: return static_cast<std::size_t>(len.value());
    }
    return 0;
  }

  void set(Factor f, std::size_t bucket) {
    switch (f) {
      case Factor::Freq: freq = static_cast<FreqBucket>(bucket); break;
      case Factor::Pos: pos = static_cast<PosGroup>(bucket); break;
      case Factor::Disc: disc = static_cast<DiscBucket>(bucket); break;
      case Factor::Len: len = static_cast<LenBucket>(bucket); break;
    }
  }
};

inline std::string_view bucket_name(Factor f, std::size_t bucket) {
  switch (f) {
    case Factor::Freq: return to_string(static_cast<FreqBucket>(bucket));
    case Factor::Pos: return to_string(static_cast<PosGroup>(bucket));
    case Factor::Disc: return to_string(static_cast<DiscBucket>(bucket));
    case Factor::Len: return to_string(static_cast<LenBucket>(bucket));
  }
  return {};
}

/// Label such as "Low" or "Low/Func", listing the factors in the given order.
inline std::string label(const GroupKey& key, std::span<const Factor> order) {
  std::string out;
  for (Factor f : order) {
    if (!key.has(f)) continue;
    if (!out.empty()) out += '/';
    out += bucket_name(f, key.index(f));
  }
  return out;
}

inline std::string label(const GroupKey& key) {
  constexpr std::array<Factor, 4> canonical{Factor::Freq, Factor::Pos, Factor::Disc, Factor::Len};
  return label(key, canonical);
}

}  // namespace tokfit
