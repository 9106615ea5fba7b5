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

// Test-only helpers and independent oracles. Nothing here calls into the
// code paths it is used to check.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace tokfit::testing {

namespace fs = std::filesystem;

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("tokfit_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

/// Every file below `dir`, keyed by relative path, with its bytes.
inline std::vector<std::pair<std::string, std::string>> snapshot(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out.emplace_back(fs::relative(e.path(), dir).string(), slurp(e.path()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Exhaustive best-fit scan: tries every index and keeps the one that is
/// lexicographically smallest in (loss, |i - s|, i).
struct ScanResult {
  std::size_t best = 0;
  std::int64_t offset = 0;
  bool censored = false;
  double gain = 0.0;
};

inline ScanResult exhaustive_scan(const std::vector<double>& loss, const std::vector<double>& acc,
                                  std::size_t s) {
  ScanResult r;
  const std::size_t k = loss.size();
  for (std::size_t i = 1; i <= k; ++i) {
    bool better_than_all = true;
    for (std::size_t j = 1; j <= k; ++j) {
      if (j == i) continue;
      const auto di = std::llabs(static_cast<long long>(i) - static_cast<long long>(s));
      const auto dj = std::llabs(static_cast<long long>(j) - static_cast<long long>(s));
      const bool j_wins = loss[j - 1] < loss[i - 1] ||
                          (loss[j - 1] == loss[i - 1] && (dj < di || (dj == di && j < i)));
      if (j_wins) {
        better_than_all = false;
        break;
      }
    }
    if (better_than_all) {
      r.best = i;
      break;
    }
  }
  r.offset = static_cast<std::int64_t>(r.best) - static_cast<std::int64_t>(s);
  r.censored = r.best == 1 || r.best == k;
  r.gain = acc[r.best - 1] - acc[s - 1];
  return r;
}

/// Pascal's triangle in 128-bit integers; exact for m <= 125.
inline std::vector<unsigned __int128> pascal_row(unsigned m) {
  std::vector<unsigned __int128> row{1};
  for (unsigned n = 1; n <= m; ++n) {
    std::vector<unsigned __int128> next(n + 1, 1);
    for (unsigned i = 1; i < n; ++i) next[i] = row[i - 1] + row[i];
    row = std::move(next);
  }
  return row;
}

/// Two-sided sign-test p-value from Pascal's triangle, computed in long
/// double. Independent of the big-integer route under test.
inline double pascal_sign_p(unsigned n_pos, unsigned n_neg) {
  const unsigned m = n_pos + n_neg;
  const unsigned k = std::min(n_pos, n_neg);
  const auto row = pascal_row(m);
  unsigned __int128 tail = 0;
  for (unsigned i = 0; i <= k; ++i) tail += row[i];
  const long double p = 2.0L * static_cast<long double>(tail) / std::ldexp(1.0L, static_cast<int>(m));
  return static_cast<double>(std::min(1.0L, p));
}

/// Zipf-like train counts: round(scale / rank^a) + jitter, at least 0.
inline std::vector<std::int64_t> zipf_counts(std::size_t n_types, double a, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> jitter(0, 3);
  std::vector<std::int64_t> out(n_types);
  for (std::size_t r = 0; r < n_types; ++r) {
    out[r] = static_cast<std::int64_t>(std::llround(1e6 / std::pow(static_cast<double>(r + 1), a))) +
             jitter(rng);
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace tokfit::testing
