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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tokfit/error.hpp"
#include "tokfit/group_key.hpp"

namespace tokfit {

using BigInt = boost::multiprecision::cpp_int;

/// Per-seed fitting offsets of one group.
struct OffsetSample {
  GroupKey group;
  std::vector<std::int64_t> offsets;
  std::vector<bool> censored_flags;
};

struct SignTestResult {
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  std::size_t n_zero = 0;
  double p_two_sided = 1.0;
  double reject_at = 0.05;

  [[nodiscard]] bool rejected() const { return p_two_sided < reject_at; }
};

struct OffsetSummary {
  double mean = 0.0;
  double std = 0.0;  // population
  double censor_rate = 0.0;
};

/// C(n, k) exactly.
inline BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt c = 1;
  for (unsigned i = 1; i <= k; ++i) {
    c *= n - k + i;
    c /= i;  // exact: c is C(n-k+i, i) after this step
  }
  return c;
}

/// Σ_{i=0..k} C(m, i), exactly.
inline BigInt binomial_lower_tail_count(unsigned m, unsigned k) {
  BigInt sum = 0;
  BigInt c = 1;  // C(m, 0)
  for (unsigned i = 0; i <= std::min(k, m); ++i) {
    sum += c;
    c *= m - i;
    c /= i + 1;
  }
  return sum;
}

/// Exact two-sided sign test. Zero offsets are dropped; with m non-zero
/// observations and k = min(#pos, #neg),
///
///   p = min(1, 2 · Σ_{i≤k} C(m, i) / 2^m),
///
/// evaluated in integer arithmetic and rounded to double once at the end.
inline SignTestResult sign_test(std::span<const std::int64_t> offsets, double alpha = 0.05) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("significance level must lie in (0, 1), got " + std::to_string(alpha));
  }
  SignTestResult r;
  r.reject_at = alpha;
  for (std::int64_t v : offsets) {
    if (v > 0) {
      ++r.n_pos;
    } else if (v < 0) {
      ++r.n_neg;
    } else {
      ++r.n_zero;
    }
  }
  const std::size_t m = r.n_pos + r.n_neg;
  if (m == 0) {
    throw DegenerateSampleError("sign test on " + std::to_string(offsets.size()) +
                                " observations, none of them non-zero");
  }
  const auto k = static_cast<unsigned>(std::min(r.n_pos, r.n_neg));
  const BigInt numerator = 2 * binomial_lower_tail_count(static_cast<unsigned>(m), k);
  const BigInt denominator = BigInt(1) << m;
  if (numerator >= denominator) {
    r.p_two_sided = 1.0;
  } else {
    // numerator < 2^m, so scaling by 2^-m is exact barring underflow; the
    // only rounding is the integer-to-double conversion.
    r.p_two_sided = std::ldexp(numerator.convert_to<double>(), -static_cast<int>(m));
  }
  return r;
}

inline OffsetSummary summarize_offsets(const OffsetSample& sample) {
  if (sample.offsets.empty()) {
    throw StructuralError("cannot summarize an empty offset sample for group '" +
                          label(sample.group) + "'");
  }
  if (sample.censored_flags.size() != sample.offsets.size()) {
    throw StructuralError("offset sample for group '" + label(sample.group) + "' has " +
                          std::to_string(sample.offsets.size()) + " offsets but " +
                          std::to_string(sample.censored_flags.size()) + " censored flags");
  }
  const auto n = static_cast<double>(sample.offsets.size());
  double sum = 0.0;
  for (std::int64_t v : sample.offsets) sum += static_cast<double>(v);
  OffsetSummary s;
  s.mean = sum / n;
  double sq = 0.0;
  for (std::int64_t v : sample.offsets) {
    const double d = static_cast<double>(v) - s.mean;
    sq += d * d;
  }
  s.std = std::sqrt(sq / n);
  s.censor_rate = static_cast<double>(std::count(sample.censored_flags.begin(),
                                                 sample.censored_flags.end(), true)) /
                  n;
  return s;
}

}  // namespace tokfit
